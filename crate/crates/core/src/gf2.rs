//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are row vectors throughout. A product such as `y Hᵀ` is computed
//! with [`SparseBitMatrix::mul_vec`] / [`DenseBitMatrix::mul_vec`] (one output
//! bit per matrix row), while `v G` is [`DenseBitMatrix::left_mul`] (XOR of the
//! rows selected by `v`).
//!
//! Bit `i` of a packed vector lives in word `i / 64` at position `i % 64`.
//! Unused high bits of the last word are always zero, so word-level popcount
//! and equality are exact.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use rand::Rng;

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

/// A packed binary vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            words: vec![!0; words_for(len)],
            len,
        };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "bad bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }

    /// The low `len` bits of `value`, bit `i` of the vector being bit `i` of
    /// the integer.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & tail_mask(len);
        }
        v
    }

    /// Integer whose bit `i` is bit `i` of the vector. Requires `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            words: (0..words_for(len)).map(|_| rng.random()).collect(),
            len,
        };
        v.clear_tail();
        v
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut v = Self { words, len };
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign_checked(&mut self, other: &Self) -> Result<()> {
        check_len(self.len, other.len)?;
        *self ^= other;
        Ok(())
    }

    /// Hamming weight of `self ⊕ other` without allocating.
    #[inline]
    pub fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        xor_weight(&self.words, &other.words)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Indices of the 1-bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copies the bits at `positions` into a new vector.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(positions.len());
        for (i, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(i, true);
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }
}

#[inline]
pub(crate) fn xor_weight(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let bits: Vec<bool> = iter.into_iter().collect();
        Self::from_bools(&bits)
    }
}

/// Dense row-major binary matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseBitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`DenseBitMatrix::row_reduce`].
#[derive(Clone, Debug)]
pub struct RowEchelon {
    /// Reduced row-echelon form; the first `rank` rows are nonzero.
    pub matrix: DenseBitMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl DenseBitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            check_len(cols, r.len())?;
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitVector::parse(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let rows: Vec<BitVector> = (0..rows).map(|_| BitVector::random(cols, rng)).collect();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.row_words(r).to_vec(), self.cols)
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) -> Result<()> {
        check_len(self.cols, v.len())?;
        self.row_words_mut(r).copy_from_slice(v.words());
        Ok(())
    }

    /// `row[dst] ^= row[src]`.
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..(a.min(b) + 1) * s].swap_with_slice(&mut hi[..s]);
    }

    /// `M vᵀ`: output bit `r` is the parity of row `r` masked by `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.cols, v.len())?;
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// `v M`: XOR of the rows selected by the 1-bits of `v`.
    pub fn left_mul(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.rows, v.len())?;
        let mut acc = vec![0u64; self.stride];
        for r in v.iter_ones() {
            for (a, b) in acc.iter_mut().zip(self.row_words(r)) {
                *a ^= b;
            }
        }
        Ok(BitVector::from_words(acc, self.cols))
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &DenseBitMatrix) -> Result<DenseBitMatrix> {
        check_len(self.cols, rhs.rows)?;
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            let prod = rhs.left_mul(&row)?;
            out.row_words_mut(r).copy_from_slice(prod.words());
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseBitMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> DenseBitMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Gauss-Jordan elimination to reduced row-echelon form.
    ///
    /// Pivots are taken greedily left to right, so `pivots` is the
    /// lexicographically first set of linearly independent columns.
    pub fn row_reduce(&self) -> RowEchelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        RowEchelon {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    /// Reduces in place, choosing pivots only among the first `limit`
    /// columns. Returns the pivot columns.
    pub(crate) fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            let (w, mask) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
            let Some(p) = (row..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.data[r * self.stride + w] & mask != 0 {
                    self.xor_rows(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Inverse of a square full-rank matrix.
    pub fn invert(&self) -> Result<DenseBitMatrix> {
        check_len(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(n))?;
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        Ok(aug.column_range(n, 2 * n))
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &DenseBitMatrix) -> Result<DenseBitMatrix> {
        check_len(self.rows, rhs.rows)?;
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                out.set(r, c, true);
            }
            for c in rhs.row(r).iter_ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> DenseBitMatrix {
        let cols: Vec<usize> = (start..end).collect();
        self.select_columns(&cols)
    }
}

impl fmt::Debug for DenseBitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseBitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Sparse binary matrix stored as sorted column indices per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitMatrix {
    cols: usize,
    row_indices: Vec<Vec<usize>>,
}

impl SparseBitMatrix {
    /// Validates that every row is strictly increasing and in range.
    pub fn new(cols: usize, row_indices: Vec<Vec<usize>>) -> Result<Self> {
        for (r, idx) in row_indices.iter().enumerate() {
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "row {r} indices are not strictly increasing"
                )));
            }
            if let Some(&last) = idx.last() {
                if last >= cols {
                    return Err(Error::InvalidParameter(format!(
                        "row {r} has column {last} >= {cols}"
                    )));
                }
            }
        }
        Ok(Self { cols, row_indices })
    }

    pub fn from_dense(m: &DenseBitMatrix) -> Self {
        let rows = (0..m.rows())
            .map(|r| m.row(r).iter_ones().collect())
            .collect();
        Self {
            cols: m.cols(),
            row_indices: rows,
        }
    }

    pub fn to_dense(&self) -> DenseBitMatrix {
        let mut d = DenseBitMatrix::zeros(self.rows(), self.cols);
        for (r, idx) in self.row_indices.iter().enumerate() {
            for &c in idx {
                d.set(r, c, true);
            }
        }
        d
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.row_indices.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_indices[r]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[usize]> {
        self.row_indices.iter().map(Vec::as_slice)
    }

    pub fn nnz(&self) -> usize {
        self.row_indices.iter().map(Vec::len).sum()
    }

    /// Row indices of each column, increasing.
    pub fn column_indices(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, idx) in self.row_indices.iter().enumerate() {
            for &c in idx {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_indices.iter().map(Vec::len).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for idx in &self.row_indices {
            for &c in idx {
                w[c] += 1;
            }
        }
        w
    }

    /// `M vᵀ`, i.e. the syndrome `v Mᵀ` when `M` is a parity-check matrix.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.cols, v.len())?;
        let words = v.words();
        let mut out = BitVector::zeros(self.rows());
        for (r, idx) in self.row_indices.iter().enumerate() {
            let parity = idx.iter().fold(0u64, |acc, &c| {
                acc ^ (words[c / WORD_BITS] >> (c % WORD_BITS))
            });
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }
}
