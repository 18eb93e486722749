//! Accessible capacity of the extra-bit link for short payload codes.
//!
//! With the payload code fixed, the extra bits can be carried at rates up to
//! `C_a = C_BIOS - I(C;Y)/n`, where `I(C;Y)` is the mutual information
//! between a uniform payload codeword and the channel output. Both terms are
//! estimated from the same channel draws.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::BiosChannel;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, DenseBitMatrix};
use crate::rng::{stream_rng, MeanAccumulator};

/// Largest dimension accepted for codeword enumeration.
pub const MAX_K: usize = 16;
const CHUNK: usize = 1 << 16;
const DOMAIN: u64 = 0x6361_7061;

/// A short linear code given by its full codeword list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortCode {
    codewords: Vec<BitVector>,
    n: usize,
    k: usize,
}

impl ShortCode {
    /// Enumerates the span of the rows of `g`, which must be independent.
    pub fn from_generator(g: &DenseBitMatrix) -> Result<Self> {
        let (k, n) = (g.rows(), g.cols());
        if k > MAX_K {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds {MAX_K}")));
        }
        if g.rank() != k {
            return Err(Error::RankDeficient {
                rank: g.rank(),
                expected: k,
            });
        }
        let codewords = (0u64..1 << k)
            .map(|u| g.left_mul(&BitVector::from_u64(u, k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { codewords, n, k })
    }

    /// The `[n, 1]` repetition code.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::from_generator(&DenseBitMatrix::from_rows(&[BitVector::ones(n)])?)
    }

    /// The `[8, 4]` extended Hamming code.
    pub fn extended_hamming_8_4() -> Self {
        let g = DenseBitMatrix::parse_rows(&["11111111", "01010101", "00110011", "00001111"])
            .expect("valid rows");
        Self::from_generator(&g).expect("independent rows")
    }

    pub fn codewords(&self) -> &[BitVector] {
        &self.codewords
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// Bits per channel use.
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl CapacityEstimate {
    fn from_acc(acc: &MeanAccumulator) -> Self {
        Self {
            value: acc.mean(),
            std_err: acc.std_err(),
            samples: acc.count,
        }
    }
}

/// All capacity quantities from one set of channel draws.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub bios: CapacityEstimate,
    /// `I(C;Y)/n`.
    pub mutual_information: CapacityEstimate,
    /// `C_BIOS - I(C;Y)/n`.
    pub accessible: CapacityEstimate,
    /// `C_BIOS - R0`.
    pub lower_bound: CapacityEstimate,
}

/// Per-draw quantities: (C_BIOS term, I(C;Y)/n term).
fn draw<R: Rng + ?Sized>(code: &ShortCode, ch: &BiosChannel, rng: &mut R) -> (f64, f64) {
    let n = code.n as f64;
    let c = &code.codewords[rng.random_range(0..code.codewords.len())];
    let y = ch.transmit(c, rng);
    let llr = ch.llr(&y);
    let hard = ch.hard_decision(&y);

    let bios = llr
        .iter()
        .zip(c.iter())
        .map(|(&l, b)| ch.capacity_term(if b { -l } else { l }))
        .sum::<f64>()
        / n;

    // ln P(y|c) relative to the best per-symbol likelihood.
    let score = |cw: &BitVector| -> f64 { (&hard ^ cw).iter_ones().map(|j| -llr[j].abs()).sum() };
    let own = score(c);
    let scores: Vec<f64> = code.codewords.iter().map(score).collect();
    let peak = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = peak + scores.iter().map(|&s| (s - peak).exp()).sum::<f64>().ln();
    let info = (own - lse) / std::f64::consts::LN_2 + code.k as f64;
    (bios, info / n)
}

/// Monte Carlo estimate of every capacity quantity with common random numbers.
pub fn capacity_report<R: Rng + ?Sized>(
    code: &ShortCode,
    ch: &BiosChannel,
    samples: usize,
    rng: &mut R,
) -> Result<CapacityReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let base: u64 = rng.random();
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<[MeanAccumulator; 3]> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut r = stream_rng(base, i as u64, 0, DOMAIN);
            let mut acc = [MeanAccumulator::default(); 3];
            let len = CHUNK.min(samples - i * CHUNK);
            for _ in 0..len {
                let (b, info) = draw(code, ch, &mut r);
                acc[0].push(b);
                acc[1].push(info);
                acc[2].push(b - info);
            }
            acc
        })
        .collect();
    let mut acc = [MeanAccumulator::default(); 3];
    for p in &parts {
        for (a, b) in acc.iter_mut().zip(p) {
            a.merge(b);
        }
    }
    let r0 = code.rate();
    let mut bios = CapacityEstimate::from_acc(&acc[0]);
    let mut accessible = CapacityEstimate::from_acc(&acc[2]);
    let mutual_information = CapacityEstimate::from_acc(&acc[1]);
    if let BiosChannel::Bsc { .. } = ch {
        let (exact, _) = ch.capacity(1, rng);
        bios = CapacityEstimate {
            value: exact,
            std_err: 0.0,
            samples: bios.samples,
        };
        accessible = CapacityEstimate {
            value: exact - mutual_information.value,
            std_err: mutual_information.std_err,
            samples: bios.samples,
        };
    }
    Ok(CapacityReport {
        bios,
        mutual_information,
        accessible,
        lower_bound: CapacityEstimate {
            value: bios.value - r0,
            ..bios
        },
    })
}

/// `I(C;Y)/n` in bits per channel use.
pub fn code_mutual_information<R: Rng + ?Sized>(
    code: &ShortCode,
    ch: &BiosChannel,
    samples: usize,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    Ok(capacity_report(code, ch, samples, rng)?.mutual_information)
}

/// `C_a = C_BIOS - I(C;Y)/n`.
pub fn accessible_capacity<R: Rng + ?Sized>(
    code: &ShortCode,
    ch: &BiosChannel,
    samples: usize,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    Ok(capacity_report(code, ch, samples, rng)?.accessible)
}

/// `C_BIOS - R0`, reported as is even when negative.
pub fn lower_bound<R: Rng + ?Sized>(
    ch: &BiosChannel,
    r0: f64,
    samples: usize,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    if !(0.0..=1.0).contains(&r0) {
        return Err(Error::InvalidParameter(format!("rate {r0} outside [0, 1]")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let (value, std_err) = ch.capacity(samples, rng);
    Ok(CapacityEstimate {
        value: value - r0,
        std_err,
        samples: samples as u64,
    })
}
