//! Random free-ride codes with exhaustive-search syndrome decoders, the
//! normal-approximation model of unsatisfied-check counts, and the resulting
//! word-error estimate.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{check_llr, ln_q_function, BiosChannel};
use crate::error::{check_len, Error, Result};
use crate::gf2::{xor_weight, BitVector, DenseBitMatrix};
use crate::ldpc::LdpcCode;
use crate::rng::stream_rng;
use crate::superposition::{DecisionMode, FreeRideCode};

/// Largest `k1` for which every candidate syndrome is stored.
pub const TABLE_MAX_K1: usize = 20;
/// Largest `k1` accepted at all; candidates are indexed by `u64`.
pub const MAX_K1: usize = 40;

const MAX_ATTEMPTS: usize = 32;
const HIST_DOMAIN: u64 = 0x6869_7374;

/// Free-ride code with a uniformly random generator `G1`.
#[derive(Clone, Debug)]
pub struct RandomFreeRideCode {
    g1: DenseBitMatrix,
    /// Row `i` is `(row i of G1) Hᵀ`.
    row_syndromes: DenseBitMatrix,
    /// `v G1 Hᵀ` for every `v`, packed with the row stride of `row_syndromes`.
    table: Option<Vec<u64>>,
    stride: usize,
}

impl RandomFreeRideCode {
    /// Draws `G1` with i.i.d. fair bits until `rank(G1 Hᵀ) = k1`.
    pub fn generate<R: Rng + ?Sized>(k1: usize, code: &LdpcCode, rng: &mut R) -> Result<Self> {
        if k1 > code.m() || k1 > MAX_K1 {
            return Err(Error::InvalidParameter(format!(
                "k1 = {k1} exceeds min(m = {}, {MAX_K1})",
                code.m()
            )));
        }
        for _ in 0..MAX_ATTEMPTS {
            if let Ok(frc) = Self::from_generator(DenseBitMatrix::random(k1, code.n(), rng), code) {
                return Ok(frc);
            }
        }
        Err(Error::Construction(format!(
            "no random G1 with full-rank syndrome image after {MAX_ATTEMPTS} draws"
        )))
    }

    /// Wraps an explicit generator, rejecting it unless all `2^k1` codewords
    /// fall in distinct cosets of the payload code.
    pub fn from_generator(g1: DenseBitMatrix, code: &LdpcCode) -> Result<Self> {
        check_len(code.n(), g1.cols())?;
        let k1 = g1.rows();
        if k1 > MAX_K1 {
            return Err(Error::InvalidParameter(format!(
                "k1 = {k1} exceeds {MAX_K1}"
            )));
        }
        let rows = (0..k1)
            .map(|i| code.syndrome(&g1.row(i)))
            .collect::<Result<Vec<_>>>()?;
        let row_syndromes = if k1 == 0 {
            DenseBitMatrix::zeros(0, code.m())
        } else {
            DenseBitMatrix::from_rows(&rows)?
        };
        let rank = row_syndromes.rank();
        if rank < k1 {
            return Err(Error::RankDeficient { rank, expected: k1 });
        }
        let stride = code.m().div_ceil(64);
        let table = (k1 <= TABLE_MAX_K1).then(|| {
            let mut t = vec![0u64; stride << k1];
            for v in 1usize..1 << k1 {
                let low = v.trailing_zeros() as usize;
                let prev = v & (v - 1);
                for w in 0..stride {
                    t[v * stride + w] = t[prev * stride + w] ^ row_syndromes.row_words(low)[w];
                }
            }
            t
        });
        Ok(Self {
            g1,
            row_syndromes,
            table,
            stride,
        })
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// `G1 Hᵀ`, the generator of the syndrome image.
    pub fn syndrome_generator(&self) -> &DenseBitMatrix {
        &self.row_syndromes
    }

    /// `v G1 Hᵀ` for the candidate with integer index `v`.
    pub fn candidate_syndrome(&self, v: u64) -> BitVector {
        let m = self.row_syndromes.cols();
        match &self.table {
            Some(t) => {
                let s = v as usize * self.stride;
                BitVector::from_words(t[s..s + self.stride].to_vec(), m)
            }
            None => self
                .row_syndromes
                .left_mul(&BitVector::from_u64(v, self.k1()))
                .expect("length is k1"),
        }
    }

    /// `N(s) = W_H(ŷHᵀ ⊕ sHᵀ)` for `s = v G1`, given the hard-decision
    /// syndrome `ŷHᵀ`.
    pub fn unsat_count_for(&self, hard_syndrome: &BitVector, v: u64) -> usize {
        match &self.table {
            Some(t) => {
                let s = v as usize * self.stride;
                xor_weight(hard_syndrome.words(), &t[s..s + self.stride])
            }
            None => hard_syndrome.distance(&self.candidate_syndrome(v)),
        }
    }

    /// Visits every candidate `v` with its syndrome words, in table order or
    /// Gray-code order when no table is stored.
    fn for_each_candidate(&self, mut f: impl FnMut(u64, &[u64])) {
        let k1 = self.k1();
        match &self.table {
            Some(t) => {
                for v in 0..1u64 << k1 {
                    let s = v as usize * self.stride;
                    f(v, &t[s..s + self.stride]);
                }
            }
            None => {
                let mut acc = vec![0u64; self.stride];
                f(0, &acc);
                for i in 1..1u64 << k1 {
                    let bit = i.trailing_zeros() as usize;
                    for (a, b) in acc.iter_mut().zip(self.row_syndromes.row_words(bit)) {
                        *a ^= b;
                    }
                    f(i ^ (i >> 1), &acc);
                }
            }
        }
    }

    /// Hard-decision decoding: the candidate with the fewest unsatisfied
    /// checks, smallest `v` on ties. Returns `(v̂, N(ŝ))`.
    pub fn decode_hard_syndrome(&self, hard_syndrome: &BitVector) -> (u64, usize) {
        let mut best = (usize::MAX, 0u64);
        self.for_each_candidate(|v, s| {
            let key = (xor_weight(hard_syndrome.words(), s), v);
            if key < (best.0, best.1) {
                best = key;
            }
        });
        (best.1, best.0)
    }

    /// Soft-decision decoding from per-check LLRs `L_i`: maximises
    /// `Λ(s) = Σ_i (-1)^{(sHᵀ)_i} L_i`, smallest `v` on ties.
    pub fn decode_check_llrs(&self, check_llrs: &[f64]) -> (u64, f64) {
        let total: f64 = check_llrs.iter().sum();
        let mut best = (f64::NEG_INFINITY, 0u64);
        self.for_each_candidate(|v, s| {
            let mut flipped = 0.0;
            for (w, &word) in s.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    flipped += check_llrs[w * 64 + bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
            }
            let score = total - 2.0 * flipped;
            if score > best.0 || (score == best.0 && v < best.1) {
                best = (score, v);
            }
        });
        (best.1, best.0)
    }

    pub fn hdd_decode(&self, code: &LdpcCode, ch: &BiosChannel, y: &[f64]) -> Result<BitVector> {
        check_len(code.n(), y.len())?;
        let syn = code.syndrome(&ch.hard_decision(y))?;
        Ok(BitVector::from_u64(
            self.decode_hard_syndrome(&syn).0,
            self.k1(),
        ))
    }

    pub fn sdd_decode(&self, code: &LdpcCode, ch: &BiosChannel, y: &[f64]) -> Result<BitVector> {
        check_len(code.n(), y.len())?;
        let llrs = check_llrs(code, &ch.llr(y));
        Ok(BitVector::from_u64(
            self.decode_check_llrs(&llrs).0,
            self.k1(),
        ))
    }
}

impl FreeRideCode for RandomFreeRideCode {
    fn k1(&self) -> usize {
        self.g1.rows()
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
        match mode {
            DecisionMode::Hdd => self.hdd_decode(code, ch, y),
            DecisionMode::Sdd => self.sdd_decode(code, ch, y),
        }
    }
}

/// Tanh-rule LLR of every parity check: `2 atanh(∏_{j∈check} tanh(Λ_j/2))`.
pub fn check_llrs(code: &LdpcCode, llr: &[f64]) -> Vec<f64> {
    code.h()
        .iter_rows()
        .map(|row| check_llr(row.iter().map(|&j| llr[j])))
        .collect()
}

/// `N(s) = W_H((ŷ ⊕ s) Hᵀ)` computed from scratch.
pub fn unsat_count(code: &LdpcCode, y_hard: &BitVector, s: &BitVector) -> Result<usize> {
    check_len(code.n(), s.len())?;
    Ok(code.syndrome(&(y_hard ^ s))?.weight())
}

/// Normal approximation of the unsatisfied-check counts under the correct
/// hypothesis (`mu0`, `sigma0_sq`) and a wrong one (`mu1`, `sigma1_sq`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SyndromeStatModel {
    pub m: usize,
    pub rho: usize,
    pub p_b: f64,
    /// Probability that a single check is unsatisfied by the noise.
    pub p: f64,
    pub mu0: f64,
    pub sigma0_sq: f64,
    pub mu1: f64,
    pub sigma1_sq: f64,
}

impl SyndromeStatModel {
    pub fn new(m: usize, rho: usize, p_b: f64) -> Self {
        let mf = m as f64;
        let a = 1.0 - 2.0 * p_b;
        let p = 0.5 * (1.0 - a.powi(rho as i32));
        Self {
            m,
            rho,
            p_b,
            p,
            mu0: mf * p,
            sigma0_sq: 0.25 * mf * (1.0 - a.powi(2 * rho as i32)),
            mu1: 0.5 * mf,
            sigma1_sq: 0.25 * mf,
        }
    }
}

/// Model for a regular code on the given channel.
pub fn stat_model(code: &LdpcCode, ch: &BiosChannel) -> Result<SyndromeStatModel> {
    let (_, rho) = code
        .regularity()
        .ok_or_else(|| Error::InvalidParameter("syndrome model needs a regular code".into()))?;
    Ok(SyndromeStatModel::new(code.m(), rho, ch.hard_crossover()))
}

/// Approximate hard-decision word-error rate of a random free-ride code:
/// `1 - ∫ φ(t; μ0, σ0) Q((2t - m)/√m)^{2^k1 - 1} dt` over `μ0 ± 10σ0`.
pub fn wer_estimate(model: &SyndromeStatModel, k1: usize) -> Result<f64> {
    if k1 == 0 {
        return Err(Error::InvalidParameter("k1 must be at least 1".into()));
    }
    let mf = model.m as f64;
    let rivals = (2f64).powi(k1 as i32) - 1.0;
    // 1 - Q(z)^N without cancellation.
    let miss = |t: f64| -(rivals * ln_q_function((2.0 * t - mf) / mf.sqrt())).exp_m1();
    let sigma0 = model.sigma0_sq.sqrt();
    if sigma0 == 0.0 {
        return Ok(miss(model.mu0));
    }
    let (lo, hi) = (model.mu0 - 10.0 * sigma0, model.mu0 + 10.0 * sigma0);
    const INTERVALS: usize = 20_000;
    let h = (hi - lo) / INTERVALS as f64;
    let norm = 1.0 / (sigma0 * (2.0 * std::f64::consts::PI).sqrt());
    let f = |t: f64| {
        let z = (t - model.mu0) / sigma0;
        norm * (-0.5 * z * z).exp() * miss(t)
    };
    let mut sum = f(lo) + f(hi);
    for i in 1..INTERVALS {
        sum += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok((sum * h / 3.0).clamp(0.0, 1.0))
}

/// Empirical distributions of `N(w)` and of `N(s)` for one uniformly drawn
/// wrong candidate `s` per trial. Index `i` of each vector counts trials with
/// `i` unsatisfied checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyndromeHistogram {
    pub correct: Vec<u64>,
    pub wrong: Vec<u64>,
}

impl SyndromeHistogram {
    fn zeros(m: usize) -> Self {
        Self {
            correct: vec![0; m + 1],
            wrong: vec![0; m + 1],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.correct.iter_mut().zip(&other.correct) {
            *a += b;
        }
        for (a, b) in self.wrong.iter_mut().zip(&other.wrong) {
            *a += b;
        }
        self
    }

    pub fn trials(&self) -> u64 {
        self.correct.iter().sum()
    }

    /// Sample mean and standard error of the mean of `counts`.
    pub fn mean_and_std_err(counts: &[u64]) -> (f64, f64) {
        let n: f64 = counts.iter().sum::<u64>() as f64;
        let mean = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| i as f64 * c as f64)
            .sum::<f64>()
            / n;
        let var = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 - mean).powi(2) * c as f64)
            .sum::<f64>()
            / (n - 1.0);
        (mean, (var / n).sqrt())
    }
}

/// Runs `trials` independent transmissions of `c ⊕ vG1` and records the
/// unsatisfied-check counts of the correct and of one wrong candidate.
pub fn syndrome_histogram<R: Rng + ?Sized>(
    code: &LdpcCode,
    frc: &RandomFreeRideCode,
    ch: &BiosChannel,
    trials: u64,
    rng: &mut R,
) -> Result<SyndromeHistogram> {
    let k1 = frc.k1();
    if k1 == 0 || trials == 0 {
        return Err(Error::InvalidParameter(
            "histogram needs k1 >= 1 and at least one trial".into(),
        ));
    }
    let base: u64 = rng.random();
    let count = 1u64 << k1;
    let trial = |t: u64| -> Result<(usize, usize)> {
        let mut r = stream_rng(base, t, 0, HIST_DOMAIN);
        let u = BitVector::random(code.k(), &mut r);
        let v = r.random_range(0..count);
        let wrong = (v + 1 + r.random_range(0..count - 1)) % count;
        let x = &code.encode(&u)? ^ &frc.encode(&BitVector::from_u64(v, k1))?;
        let y = ch.transmit(&x, &mut r);
        let syn = code.syndrome(&ch.hard_decision(&y))?;
        Ok((
            frc.unsat_count_for(&syn, v),
            frc.unsat_count_for(&syn, wrong),
        ))
    };
    (0..trials)
        .into_par_iter()
        .try_fold(
            || SyndromeHistogram::zeros(code.m()),
            |mut h, t| {
                let (a, b) = trial(t)?;
                h.correct[a] += 1;
                h.wrong[b] += 1;
                Ok(h)
            },
        )
        .try_reduce(|| SyndromeHistogram::zeros(code.m()), |a, b| Ok(a.merge(b)))
}
