//! Structured free-ride codes: a syndrome code `Cs` chosen for its decoder,
//! lifted to `C1` so that `G1 Hᵀ = Gs`.

mod decode;
mod syndrome_channel;

pub use decode::{
    fht_ml_decode_rm, hadamard_transform, hdd_min_distance_decode, mlg_decode_repetition,
};
pub use syndrome_channel::{syndrome_channel, SyndromeChannelModel};

use serde::Serialize;

use crate::channel::BiosChannel;
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitVector, DenseBitMatrix};
use crate::ldpc::LdpcCode;
use crate::superposition::{DecisionMode, FreeRideCode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SyndromeCodeKind {
    /// `blocks` disjoint all-ones blocks of `block_len` columns each.
    Repetition { block_len: usize, blocks: usize },
    /// Cartesian product of `blocks` RM(1, eta) codes of length `2^eta`.
    ///
    /// Rows of block `b` are `b(eta+1) + 0` (all ones) and `b(eta+1) + 1 + r`,
    /// whose bit at block position `t` is bit `eta-1-r` of `t`. Positions of
    /// the last block at or beyond `m` are dropped; `punctured` lists them
    /// block-locally. `padded` trailing message bits of the last block are
    /// fixed to zero and have no row in `Gs`.
    Rm1 {
        eta: usize,
        blocks: usize,
        punctured: Vec<usize>,
        padded: usize,
    },
}

/// Generator `Gs` (`k1 × m`) of the code seen on the syndrome channel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeCode {
    gs: DenseBitMatrix,
    kind: SyndromeCodeKind,
}

impl SyndromeCode {
    pub fn gs(&self) -> &DenseBitMatrix {
        &self.gs
    }

    pub fn kind(&self) -> &SyndromeCodeKind {
        &self.kind
    }

    pub fn k1(&self) -> usize {
        self.gs.rows()
    }

    pub fn m(&self) -> usize {
        self.gs.cols()
    }

    /// `v Gs`.
    pub fn encode(&self, v: &BitVector) -> Result<BitVector> {
        self.gs.left_mul(v)
    }
}

/// `k1`-fold product of repetition codes of length `floor(m / k1)`.
pub fn build_repetition(k1: usize, m: usize) -> Result<SyndromeCode> {
    if k1 == 0 || k1 > m {
        return Err(Error::InvalidParameter(format!(
            "repetition syndrome code needs 1 <= k1 <= m, got k1={k1}, m={m}"
        )));
    }
    let block_len = m / k1;
    let mut gs = DenseBitMatrix::zeros(k1, m);
    for b in 0..k1 {
        for c in b * block_len..(b + 1) * block_len {
            gs.set(b, c, true);
        }
    }
    Ok(SyndromeCode {
        gs,
        kind: SyndromeCodeKind::Repetition {
            block_len,
            blocks: k1,
        },
    })
}

/// Product of first-order Reed-Muller codes.
///
/// Picks the largest `eta >= 1` with `(eta+1) | k1` and
/// `(k1/(eta+1)) 2^eta <= 2m` whose (possibly punctured) layout keeps full
/// rank. Failing that, the last block is padded with zero message bits,
/// again preferring the largest feasible `eta`.
pub fn build_rm1(k1: usize, m: usize) -> Result<SyndromeCode> {
    if k1 == 0 || k1 > m {
        return Err(Error::InvalidParameter(format!(
            "RM syndrome code needs 1 <= k1 <= m, got k1={k1}, m={m}"
        )));
    }
    let max_eta = (usize::BITS - 1 - (2 * m).leading_zeros()) as usize;
    let fits = |eta: usize, blocks: usize| blocks << eta <= 2 * m;
    for eta in (1..=max_eta).rev() {
        if k1.is_multiple_of(eta + 1) && fits(eta, k1 / (eta + 1)) {
            if let Some(sc) = rm1_layout(k1, m, eta, 0) {
                return Ok(sc);
            }
        }
    }
    for eta in (1..=max_eta).rev() {
        let blocks = k1.div_ceil(eta + 1);
        let padded = blocks * (eta + 1) - k1;
        if padded > 0 && padded < eta + 1 && fits(eta, blocks) {
            if let Some(sc) = rm1_layout(k1, m, eta, padded) {
                return Ok(sc);
            }
        }
    }
    Err(Error::Construction(format!(
        "no feasible RM(1, eta) layout for k1={k1}, m={m}"
    )))
}

fn rm1_layout(k1: usize, m: usize, eta: usize, padded: usize) -> Option<SyndromeCode> {
    let len = 1usize << eta;
    let blocks = (k1 + padded) / (eta + 1);
    let mut gs = DenseBitMatrix::zeros(k1, m);
    for b in 0..blocks {
        for t in 0..len {
            let col = b * len + t;
            if col >= m {
                break;
            }
            for j in 0..=eta {
                let row = b * (eta + 1) + j;
                if row >= k1 {
                    break;
                }
                let bit = j == 0 || (t >> (eta - j)) & 1 == 1;
                if bit {
                    gs.set(row, col, true);
                }
            }
        }
    }
    if gs.rank() < k1 {
        return None;
    }
    let last_start = (blocks - 1) * len;
    let punctured = (0..len).filter(|&t| last_start + t >= m).collect();
    Some(SyndromeCode {
        gs,
        kind: SyndromeCodeKind::Rm1 {
            eta,
            blocks,
            punctured,
            padded,
        },
    })
}

/// `P(Bin(m1, p) >= ceil(m1/2))`, the block error of majority decoding on a
/// BSC counting ties as errors.
pub fn repetition_block_error(m1: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let n = m1 as f64;
    let ln_choose = |i: usize| {
        libm::lgamma(n + 1.0) - libm::lgamma(i as f64 + 1.0) - libm::lgamma(n - i as f64 + 1.0)
    };
    (m1.div_ceil(2)..=m1)
        .map(|i| (ln_choose(i) + i as f64 * p.ln() + (n - i as f64) * (-p).ln_1p()).exp())
        .sum::<f64>()
        .min(1.0)
}

/// Word-error estimate of `k1` majority-decoded repetition blocks of length
/// `m1` over an ideal BSC(p) syndrome channel.
pub fn wer_estimate_repetition(m1: usize, p: f64, k1: usize) -> Result<f64> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1/2]")));
    }
    let beta = repetition_block_error(m1, p);
    Ok(-(k1 as f64 * (-beta).ln_1p()).exp_m1())
}

/// Free-ride code obtained by lifting a syndrome code through the pivot
/// columns of `H`.
#[derive(Clone, Debug)]
pub struct StructuredFreeRideCode {
    syndrome_code: SyndromeCode,
    g1: DenseBitMatrix,
    pivot_cols: Vec<usize>,
}

impl StructuredFreeRideCode {
    pub fn syndrome_code(&self) -> &SyndromeCode {
        &self.syndrome_code
    }

    /// Columns of `H` forming the invertible submatrix `H1`; `G1` is zero
    /// elsewhere.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Decodes `v` from a syndrome-channel observation.
    pub fn decode_model(
        &self,
        model: &SyndromeChannelModel,
        mode: DecisionMode,
    ) -> Result<BitVector> {
        match self.syndrome_code.kind {
            SyndromeCodeKind::Repetition { .. } => {
                mlg_decode_repetition(&self.syndrome_code, model, mode)
            }
            SyndromeCodeKind::Rm1 { .. } => fht_ml_decode_rm(&self.syndrome_code, &model.llrs),
        }
    }
}

/// `G1 = Gs (H1⁻¹)ᵀ` scattered into the pivot columns of `H`.
pub fn lift(code: &LdpcCode, sc: &SyndromeCode) -> Result<StructuredFreeRideCode> {
    check_len(code.m(), sc.m())?;
    let sys = code.systematic();
    let mut g1 = DenseBitMatrix::zeros(sc.k1(), code.n());
    for i in 0..sc.k1() {
        let local = sys.pivot_inverse.mul_vec(&sc.gs.row(i))?;
        for r in local.iter_ones() {
            g1.set(i, sys.pivot_cols[r], true);
        }
    }
    let check = (0..sc.k1()).all(|i| {
        code.syndrome(&g1.row(i))
            .map(|s| s == sc.gs.row(i))
            .unwrap_or(false)
    });
    if !check {
        return Err(Error::Construction(
            "lifted generator does not reproduce Gs".into(),
        ));
    }
    Ok(StructuredFreeRideCode {
        syndrome_code: sc.clone(),
        g1,
        pivot_cols: sys.pivot_cols.clone(),
    })
}

impl FreeRideCode for StructuredFreeRideCode {
    fn k1(&self) -> usize {
        self.syndrome_code.k1()
    }

    fn g1(&self) -> &DenseBitMatrix {
        &self.g1
    }

    fn decode_extra(
        &self,
        code: &LdpcCode,
        ch: &BiosChannel,
        y: &[f64],
        mode: DecisionMode,
    ) -> Result<BitVector> {
        let model = syndrome_channel(code, ch, y, mode)?;
        self.decode_model(&model, mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::SparseBitMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn repetition_layouts() {
        let sc = build_repetition(1, 5).unwrap();
        assert_eq!(sc.gs(), &DenseBitMatrix::parse_rows(&["11111"]).unwrap());
        let sc = build_repetition(2, 6).unwrap();
        assert_eq!(
            sc.gs(),
            &DenseBitMatrix::parse_rows(&["111000", "000111"]).unwrap()
        );
        let sc = build_repetition(2, 7).unwrap();
        assert_eq!(
            sc.gs(),
            &DenseBitMatrix::parse_rows(&["1110000", "0001110"]).unwrap()
        );
        let sc = build_repetition(18, 4032).unwrap();
        assert_eq!(
            sc.kind(),
            &SyndromeCodeKind::Repetition {
                block_len: 224,
                blocks: 18
            }
        );
        assert_eq!(sc.gs().rank(), 18);
        assert!(build_repetition(0, 4).is_err());
        assert!(build_repetition(5, 4).is_err());
    }

    #[test]
    fn rm_small_block() {
        let sc = build_rm1(3, 4).unwrap();
        assert_eq!(
            sc.gs(),
            &DenseBitMatrix::parse_rows(&["1111", "0011", "0101"]).unwrap()
        );
        assert_eq!(
            sc.kind(),
            &SyndromeCodeKind::Rm1 {
                eta: 2,
                blocks: 1,
                punctured: vec![],
                padded: 0
            }
        );
    }

    #[test]
    fn rm_headline_layouts() {
        let sc = build_rm1(10, 4032).unwrap();
        assert_eq!(sc.gs().rank(), 10);
        assert!(matches!(
            sc.kind(),
            SyndromeCodeKind::Rm1 {
                eta: 9,
                blocks: 1,
                ..
            }
        ));
        let sc = build_rm1(60, 4032).unwrap();
        assert_eq!(sc.gs().rank(), 60);
        assert_eq!(
            sc.kind(),
            &SyndromeCodeKind::Rm1 {
                eta: 9,
                blocks: 6,
                punctured: vec![],
                padded: 0
            }
        );
        // Columns past 6 * 512 carry nothing.
        assert!(sc.gs().column_range(3072, 4032).is_zero());
    }

    #[test]
    fn rm_block_weights() {
        let sc = build_rm1(4, 8).unwrap();
        // eta = 3: all-ones then the three coordinate functions.
        assert_eq!(
            sc.gs(),
            &DenseBitMatrix::parse_rows(&["11111111", "00001111", "00110011", "01010101"]).unwrap()
        );
        // Every nonzero codeword of RM(1,3) has weight 4 or 8.
        for v in 1u64..16 {
            let w = sc.encode(&BitVector::from_u64(v, 4)).unwrap().weight();
            assert!(w == 4 || w == 8);
        }
    }

    #[test]
    fn rm_puncturing_and_padding() {
        // k1 = 8, m = 14: eta = 3 gives two blocks of 8 > 14, so the second
        // block loses its last two positions.
        let sc = build_rm1(8, 14).unwrap();
        assert_eq!(
            sc.kind(),
            &SyndromeCodeKind::Rm1 {
                eta: 3,
                blocks: 2,
                punctured: vec![6, 7],
                padded: 0
            }
        );
        assert_eq!(sc.gs().rank(), 8);
        // k1 = 5, m = 8: RM(1,4) punctured to 8 loses rank, so pad to
        // 6 = 2 * (2 + 1).
        let sc = build_rm1(5, 8).unwrap();
        assert!(matches!(
            sc.kind(),
            SyndromeCodeKind::Rm1 {
                eta: 2,
                blocks: 2,
                padded: 1,
                ..
            }
        ));
        // k1 = 8, m = 12: the punctured eta = 3 layout is rank deficient.
        assert!(matches!(
            build_rm1(8, 12).unwrap().kind(),
            SyndromeCodeKind::Rm1 { eta: 1, .. }
        ));
        assert_eq!(sc.gs().rank(), 5);
        assert!(build_rm1(0, 4).is_err());
    }

    #[test]
    fn repetition_estimate() {
        assert!((repetition_block_error(3, 0.1) - 0.028).abs() < 1e-15);
        assert!((wer_estimate_repetition(3, 0.1, 1).unwrap() - 0.028).abs() < 1e-15);
        assert_eq!(wer_estimate_repetition(7, 0.0, 4).unwrap(), 0.0);
        assert!(repetition_block_error(9, 0.5) >= 0.5);
        assert!(repetition_block_error(10, 0.5) >= 0.5);
        let k = 18;
        let beta = repetition_block_error(224, 0.3);
        let direct = 1.0 - (1.0 - beta).powi(k);
        assert!((wer_estimate_repetition(224, 0.3, k as usize).unwrap() - direct).abs() < 1e-12);
        assert!(wer_estimate_repetition(3, 0.6, 1).is_err());
    }

    /// Exact binomial tail by the recursion on terms, for moderate lengths.
    #[test]
    fn repetition_estimate_against_term_recursion() {
        for &(m1, p) in &[(15usize, 0.2f64), (224, 0.4), (672, 0.45)] {
            let mut term = (1.0 - p).powi(m1 as i32);
            let mut tail = 0.0;
            for i in 0..=m1 {
                if i >= m1.div_ceil(2) {
                    tail += term;
                }
                term *= (m1 - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
            }
            let got = repetition_block_error(m1, p);
            assert!(
                (got - tail).abs() <= 1e-12 * tail.max(1e-300),
                "{m1} {p}: {got} vs {tail}"
            );
        }
    }

    #[test]
    fn lift_standard_form() {
        // H = [I | A] has pivots 0..m and H1 = I.
        let h = DenseBitMatrix::parse_rows(&["1000110", "0100011", "0010101", "0001111"]).unwrap();
        let code = LdpcCode::from_parity_check(SparseBitMatrix::from_dense(&h)).unwrap();
        let sc = build_repetition(2, 4).unwrap();
        let frc = lift(&code, &sc).unwrap();
        assert_eq!(frc.pivot_cols(), &[0, 1, 2, 3]);
        assert_eq!(
            frc.g1(),
            &DenseBitMatrix::parse_rows(&["1100000", "0011000"]).unwrap()
        );
    }

    #[test]
    fn lift_zero_generator() {
        let code = LdpcCode::construct_regular(64, 3, 6, 1).unwrap();
        let sc = SyndromeCode {
            gs: DenseBitMatrix::zeros(3, 32),
            kind: SyndromeCodeKind::Repetition {
                block_len: 0,
                blocks: 3,
            },
        };
        assert!(lift(&code, &sc).unwrap().g1().is_zero());
    }

    #[test]
    fn lift_reproduces_syndrome_generator() {
        let code = LdpcCode::construct_regular(256, 3, 6, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sc in [
            build_repetition(6, 128).unwrap(),
            build_repetition(18, 128).unwrap(),
            build_rm1(8, 128).unwrap(),
            build_rm1(12, 128).unwrap(),
        ] {
            let frc = lift(&code, &sc).unwrap();
            let g1ht = DenseBitMatrix::from_rows(
                &(0..sc.k1())
                    .map(|i| code.syndrome(&frc.g1().row(i)).unwrap())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(&g1ht, sc.gs());
            let pivots: std::collections::HashSet<_> = frc.pivot_cols().iter().copied().collect();
            for i in 0..sc.k1() {
                assert!(frc.g1().row(i).iter_ones().all(|c| pivots.contains(&c)));
            }
            assert!(frc.encode(&BitVector::zeros(sc.k1())).unwrap().is_zero());
            for i in 0..sc.k1() {
                assert_eq!(
                    frc.encode(&BitVector::unit(sc.k1(), i)).unwrap(),
                    frc.g1().row(i)
                );
            }
            for _ in 0..10 {
                let v = BitVector::random(sc.k1(), &mut rng);
                let w = frc.encode(&v).unwrap();
                assert_eq!(code.syndrome(&w).unwrap(), sc.encode(&v).unwrap());
            }
        }
    }

    #[test]
    fn cosets_are_distinct() {
        let code = LdpcCode::construct_regular(128, 3, 6, 2).unwrap();
        for sc in [
            build_repetition(12, 64).unwrap(),
            build_rm1(12, 64).unwrap(),
        ] {
            let frc = lift(&code, &sc).unwrap();
            let mut seen = std::collections::HashSet::new();
            for v in 0u64..1 << 12 {
                let w = frc.encode(&BitVector::from_u64(v, 12)).unwrap();
                assert!(
                    seen.insert(code.syndrome(&w).unwrap()),
                    "coset collision at v={v}"
                );
            }
        }
    }
}
