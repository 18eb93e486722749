//! MacKay alist text format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;

pub fn to_alist(h: &SparseBitMatrix) -> String {
    let cols = h.column_indices();
    let cw = h.column_weights();
    let rw = h.row_weights();
    let max_c = cw.iter().copied().max().unwrap_or(0);
    let max_r = rw.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    let join = |xs: &[usize]| {
        xs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let padded = |xs: &[usize], width: usize| {
        let mut v: Vec<usize> = xs.iter().map(|&x| x + 1).collect();
        v.resize(width, 0);
        join(&v)
    };
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(out, "{max_c} {max_r}").unwrap();
    writeln!(out, "{}", join(&cw)).unwrap();
    writeln!(out, "{}", join(&rw)).unwrap();
    for c in &cols {
        writeln!(out, "{}", padded(c, max_c)).unwrap();
    }
    for r in h.iter_rows() {
        writeln!(out, "{}", padded(r, max_r)).unwrap();
    }
    out
}

pub fn parse_alist(text: &str) -> Result<SparseBitMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next_numbers = |what: &str| -> Result<(usize, Vec<usize>)> {
        let (no, line) = lines.next().ok_or_else(|| Error::Alist {
            line: 0,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Alist {
                    line: no,
                    msg: format!("bad integer {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((no, nums))
    };
    let bad = |line: usize, msg: String| Error::Alist { line, msg };

    let (no, dims) = next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(bad(no, "expected \"n m\"".into()));
    };
    let (no, maxes) = next_numbers("maximum weights")?;
    if maxes.len() != 2 {
        return Err(bad(no, "expected two maximum weights".into()));
    }
    let (no, cw) = next_numbers("column weights")?;
    if cw.len() != n {
        return Err(bad(no, format!("expected {n} column weights")));
    }
    let (no, rw) = next_numbers("row weights")?;
    if rw.len() != m {
        return Err(bad(no, format!("expected {m} row weights")));
    }

    let mut col_lists = Vec::with_capacity(n);
    for &w in &cw {
        let (no, mut idx) = next_numbers("column indices")?;
        idx.retain(|&x| x != 0);
        if idx.len() != w || idx.iter().any(|&r| r > m) {
            return Err(bad(
                no,
                "column list does not match its weight or range".into(),
            ));
        }
        col_lists.push(idx);
    }
    let mut rows = Vec::with_capacity(m);
    for &w in &rw {
        let (no, mut idx) = next_numbers("row indices")?;
        idx.retain(|&x| x != 0);
        if idx.len() != w || idx.iter().any(|&c| c > n) {
            return Err(bad(
                no,
                "row list does not match its weight or range".into(),
            ));
        }
        let mut row: Vec<usize> = idx.into_iter().map(|c| c - 1).collect();
        row.sort_unstable();
        rows.push(row);
    }

    let h = SparseBitMatrix::new(n, rows).map_err(|e| bad(0, e.to_string()))?;
    let from_rows = h.column_indices();
    for (c, list) in col_lists.iter_mut().enumerate() {
        list.iter_mut().for_each(|r| *r -= 1);
        list.sort_unstable();
        if *list != from_rows[c] {
            return Err(bad(
                0,
                format!("column {} disagrees with the row lists", c + 1),
            ));
        }
    }
    Ok(h)
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<SparseBitMatrix> {
    parse_alist(&std::fs::read_to_string(path)?)
}

pub fn write_alist(path: impl AsRef<Path>, h: &SparseBitMatrix) -> Result<()> {
    std::fs::write(path, to_alist(h))?;
    Ok(())
}
