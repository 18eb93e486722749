//! Progressive edge-growth construction of regular parity-check matrices.

use std::collections::HashSet;

use rand::Rng;

use super::LdpcCode;
use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;
use crate::rng::stream_rng;

const DOMAIN: u64 = 0x7065_675f_6c64_7063;
const MAX_ATTEMPTS: u64 = 64;

pub(super) fn construct_regular(n: usize, gamma: usize, rho: usize, seed: u64) -> Result<LdpcCode> {
    if gamma == 0 || rho == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "n, gamma and rho must be positive".into(),
        ));
    }
    if !(n * gamma).is_multiple_of(rho) {
        return Err(Error::InvalidParameter(format!(
            "n*gamma = {} is not divisible by rho = {rho}",
            n * gamma
        )));
    }
    let m = n * gamma / rho;
    if m >= n || gamma > m || rho > n {
        return Err(Error::InvalidParameter(format!(
            "infeasible profile: n={n}, gamma={gamma}, rho={rho} gives m={m}"
        )));
    }
    // A 4-cycle-free graph needs distinct check pairs for every column pair.
    let girth_feasible = n * gamma * (gamma - 1) / 2 <= m * (m - 1) / 2;

    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream_rng(seed, attempt, 0, DOMAIN);
        let Some(rows) = grow(n, m, gamma, rho, &mut rng) else {
            continue;
        };
        let h = SparseBitMatrix::new(n, rows)?;
        if girth_feasible && has_four_cycle(&h) {
            continue;
        }
        match LdpcCode::from_parity_check(h) {
            Ok(code) => return Ok(code),
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Construction(format!(
        "no full-rank (gamma={gamma}, rho={rho}) matrix of length {n} after {MAX_ATTEMPTS} attempts"
    )))
}

/// Grows the Tanner graph one edge at a time. Returns per-check sorted
/// variable lists, or `None` if some variable runs out of eligible checks.
fn grow<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    gamma: usize,
    rho: usize,
    rng: &mut R,
) -> Option<Vec<Vec<usize>>> {
    let mut check_adj: Vec<Vec<u32>> = vec![Vec::with_capacity(rho); m];
    let mut var_adj: Vec<Vec<u32>> = vec![Vec::with_capacity(gamma); n];
    let mut check_mark = vec![u32::MAX; m];
    let mut var_mark = vec![u32::MAX; n];
    let mut stamp = 0u32;
    let mut candidates = Vec::new();
    let mut frontier = Vec::new();
    let mut next = Vec::new();
    let mut level = Vec::new();

    for v in 0..n {
        for edge in 0..gamma {
            let eligible = |c: usize, adj: &[Vec<u32>], va: &[u32]| {
                adj[c].len() < rho && !va.contains(&(c as u32))
            };
            candidates.clear();
            if edge == 0 {
                candidates.extend((0..m).filter(|&c| check_adj[c].len() < rho));
            } else {
                let total_eligible = (0..m)
                    .filter(|&c| eligible(c, &check_adj, &var_adj[v]))
                    .count();
                if total_eligible == 0 {
                    return None;
                }
                stamp = stamp.wrapping_add(1);
                var_mark[v] = stamp;
                frontier.clear();
                for &c in &var_adj[v] {
                    check_mark[c as usize] = stamp;
                    frontier.push(c);
                }
                let mut reached_eligible = 0usize;
                loop {
                    // Expand one check level: checks -> variables -> checks.
                    next.clear();
                    level.clear();
                    for &c in &frontier {
                        for &u in &check_adj[c as usize] {
                            if var_mark[u as usize] == stamp {
                                continue;
                            }
                            var_mark[u as usize] = stamp;
                            for &c2 in &var_adj[u as usize] {
                                if check_mark[c2 as usize] != stamp {
                                    check_mark[c2 as usize] = stamp;
                                    next.push(c2);
                                    if eligible(c2 as usize, &check_adj, &var_adj[v]) {
                                        level.push(c2 as usize);
                                    }
                                }
                            }
                        }
                    }
                    if next.is_empty() {
                        // Expansion stalled: take an unreached eligible check.
                        candidates.extend((0..m).filter(|&c| {
                            check_mark[c] != stamp && eligible(c, &check_adj, &var_adj[v])
                        }));
                        break;
                    }
                    if reached_eligible + level.len() == total_eligible {
                        // Every eligible check is now reached: the farthest
                        // ones are those first reached at this level.
                        candidates.extend_from_slice(&level);
                        break;
                    }
                    reached_eligible += level.len();
                    std::mem::swap(&mut frontier, &mut next);
                }
            }
            let min_deg = candidates.iter().map(|&c| check_adj[c].len()).min()?;
            candidates.retain(|&c| check_adj[c].len() == min_deg);
            let c = candidates[rng.random_range(0..candidates.len())];
            check_adj[c].push(v as u32);
            var_adj[v].push(c as u32);
        }
    }

    Some(
        check_adj
            .into_iter()
            .map(|mut row| {
                row.sort_unstable();
                row.into_iter().map(|v| v as usize).collect()
            })
            .collect(),
    )
}

/// True if two columns share at least two rows.
pub(super) fn has_four_cycle(h: &SparseBitMatrix) -> bool {
    let mut seen = HashSet::new();
    for row in h.iter_rows() {
        for (i, &a) in row.iter().enumerate() {
            for &b in &row[i + 1..] {
                if !seen.insert((a, b)) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Column-pair overlap search on the dense matrix.
    fn four_cycle_oracle(h: &SparseBitMatrix) -> bool {
        let d = h.to_dense();
        for a in 0..d.cols() {
            for b in a + 1..d.cols() {
                let shared = (0..d.rows())
                    .filter(|&r| d.get(r, a) && d.get(r, b))
                    .count();
                if shared >= 2 {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn small_profile_weights() {
        let code = LdpcCode::construct_regular(8, 3, 6, 0).unwrap();
        assert_eq!((code.m(), code.n()), (4, 8));
        assert!(code.h().column_weights().iter().all(|&w| w == 3));
        assert!(code.h().row_weights().iter().all(|&w| w == 6));
        assert_eq!(code.regularity(), Some((3, 6)));
        assert_eq!(code.h().to_dense().rank(), 4);
    }

    #[test]
    fn length_128_is_four_cycle_free() {
        let code = LdpcCode::construct_regular(128, 3, 6, 42).unwrap();
        assert_eq!((code.m(), code.n()), (64, 128));
        assert_eq!(code.h().to_dense().rank(), 64);
        assert!(code.h().column_weights().iter().all(|&w| w == 3));
        assert!(code.h().row_weights().iter().all(|&w| w == 6));
        assert!(!four_cycle_oracle(code.h()));
        assert!(!code.has_four_cycle());
    }

    #[test]
    fn deterministic_for_seed() {
        let a = LdpcCode::construct_regular(96, 3, 6, 7).unwrap();
        let b = LdpcCode::construct_regular(96, 3, 6, 7).unwrap();
        let c = LdpcCode::construct_regular(96, 3, 6, 8).unwrap();
        assert_eq!(a.h(), b.h());
        assert_ne!(a.h(), c.h());
    }

    #[test]
    fn four_cycle_detector_agrees_with_oracle() {
        let with = SparseBitMatrix::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let without = SparseBitMatrix::new(4, vec![vec![0, 1], vec![1, 2], vec![0, 2, 3]]).unwrap();
        assert!(has_four_cycle(&with) && four_cycle_oracle(&with));
        assert!(!has_four_cycle(&without) && !four_cycle_oracle(&without));
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(LdpcCode::construct_regular(10, 3, 4, 0).is_err());
        assert!(LdpcCode::construct_regular(12, 6, 6, 0).is_err());
        assert!(LdpcCode::construct_regular(0, 3, 6, 0).is_err());
    }
}
