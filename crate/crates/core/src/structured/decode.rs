use super::syndrome_channel::SyndromeChannelModel;
use super::{SyndromeCode, SyndromeCodeKind};
use crate::error::{check_len, Error, Result};
use crate::gf2::BitVector;
use crate::superposition::DecisionMode;

/// Exhaustive search is refused above this many extra bits.
pub const MIN_DISTANCE_MAX_K1: usize = 24;

/// Majority-logic decoding of a repetition product.
///
/// Hard mode votes on the syndrome bits of each block (ties decide 0); soft
/// mode takes the sign of the summed syndrome LLRs (zero decides 0).
pub fn mlg_decode_repetition(
    sc: &SyndromeCode,
    model: &SyndromeChannelModel,
    mode: DecisionMode,
) -> Result<BitVector> {
    let SyndromeCodeKind::Repetition { block_len, blocks } = *sc.kind() else {
        return Err(Error::InvalidParameter(
            "majority logic needs a repetition code".into(),
        ));
    };
    check_len(sc.m(), model.hard_syndrome.len())?;
    check_len(sc.m(), model.llrs.len())?;
    let mut v = BitVector::zeros(blocks);
    for b in 0..blocks {
        let range = b * block_len..(b + 1) * block_len;
        let bit = match mode {
            DecisionMode::Hdd => {
                let ones = range.filter(|&i| model.hard_syndrome.get(i)).count();
                2 * ones > block_len
            }
            DecisionMode::Sdd => model.llrs[range].iter().sum::<f64>() < 0.0,
        };
        v.set(b, bit);
    }
    Ok(v)
}

/// In-place Walsh-Hadamard transform: `F(a) = Σ_t f(t) (-1)^{popcount(a & t)}`.
pub fn hadamard_transform(f: &mut [f64]) {
    let n = f.len();
    assert!(
        n.is_power_of_two(),
        "transform length must be a power of two"
    );
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (f[i], f[i + h]);
                f[i] = a + b;
                f[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Maximum-likelihood decoding of each RM(1, eta) block from syndrome LLRs.
///
/// The correlation of codeword `v0·1 ⊕ (a·t)` with the block LLRs is
/// `(-1)^{v0} F(a)`, so the best codeword is read off the largest
/// transform coefficient. Ties go to the smallest message integer.
pub fn fht_ml_decode_rm(sc: &SyndromeCode, llrs: &[f64]) -> Result<BitVector> {
    let SyndromeCodeKind::Rm1 {
        eta,
        blocks,
        padded,
        ..
    } = *sc.kind()
    else {
        return Err(Error::InvalidParameter(
            "transform decoding needs an RM code".into(),
        ));
    };
    check_len(sc.m(), llrs.len())?;
    let len = 1usize << eta;
    let k1 = sc.k1();
    let mut v = BitVector::zeros(k1);
    let mut f = vec![0.0; len];
    for b in 0..blocks {
        let start = b * len;
        for (t, x) in f.iter_mut().enumerate() {
            *x = llrs.get(start + t).copied().unwrap_or(0.0);
        }
        hadamard_transform(&mut f);
        // Padded message bits are the lowest index bits of `a` in the last block.
        let step = if b + 1 == blocks { 1usize << padded } else { 1 };
        let message = |a: usize, neg: bool| -> u64 {
            let mut m = u64::from(neg);
            for r in 0..eta {
                m |= (((a >> (eta - 1 - r)) & 1) as u64) << (1 + r);
            }
            m
        };
        let mut best = (f64::NEG_INFINITY, u64::MAX, 0usize, false);
        for a in (0..len).step_by(step) {
            for neg in [false, true] {
                let score = if neg { -f[a] } else { f[a] };
                let msg = message(a, neg);
                if score > best.0 || (score == best.0 && msg < best.1) {
                    best = (score, msg, a, neg);
                }
            }
        }
        for j in 0..=eta {
            let row = b * (eta + 1) + j;
            if row < k1 {
                v.set(row, (best.1 >> j) & 1 == 1);
            }
        }
    }
    Ok(v)
}

/// `argmin_v W_H(syndrome ⊕ v Gs)` by exhaustive search, smallest `v` on ties.
pub fn hdd_min_distance_decode(sc: &SyndromeCode, syndrome: &BitVector) -> Result<BitVector> {
    let k1 = sc.k1();
    if k1 > MIN_DISTANCE_MAX_K1 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search limited to k1 <= {MIN_DISTANCE_MAX_K1}, got {k1}"
        )));
    }
    check_len(sc.m(), syndrome.len())?;
    let mut best = (usize::MAX, 0u64);
    let mut acc = BitVector::zeros(sc.m());
    for i in 0u64..1 << k1 {
        if i > 0 {
            acc ^= &sc.gs().row(i.trailing_zeros() as usize);
        }
        let v = i ^ (i >> 1);
        let key = (acc.distance(syndrome), v);
        if key < best {
            best = key;
        }
    }
    Ok(BitVector::from_u64(best.1, k1))
}
