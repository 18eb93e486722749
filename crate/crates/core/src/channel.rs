//! Binary-input output-symmetric memoryless channels.
//!
//! LLRs follow the convention `Λ = ln P(y|0) / P(y|1)`: positive values favour
//! bit 0. Infinite LLRs are legal (σ = 0, or a BSC with p ∈ {0, 1}); anything
//! feeding the tanh rule clamps them to ±[`LLR_MAX`] first.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::gf2::BitVector;
use crate::rng::sample_std_err;

/// Magnitude bound applied to LLRs before and after the tanh rule.
pub const LLR_MAX: f64 = 40.0;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `ln Q(x)`, accurate in both tails.
pub fn ln_q_function(x: f64) -> f64 {
    if x < 0.0 {
        (-q_function(-x)).ln_1p()
    } else {
        q_function(x).ln()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

#[inline]
pub fn clamp_llr(l: f64) -> f64 {
    l.clamp(-LLR_MAX, LLR_MAX)
}

/// `tanh(l / 2)`, computed on `|l|` so that the result is exactly odd in `l`.
#[inline]
pub fn tanh_half(l: f64) -> f64 {
    let t = (0.5 * clamp_llr(l).abs()).tanh();
    if l < 0.0 {
        -t
    } else {
        t
    }
}

/// `2 atanh(p)` clamped to ±`LLR_MAX`, exactly odd in `p`.
#[inline]
pub fn llr_from_tanh(p: f64) -> f64 {
    let a = p.abs();
    let l = if a >= 1.0 {
        LLR_MAX
    } else {
        (2.0 * a.atanh()).min(LLR_MAX)
    };
    if p < 0.0 {
        -l
    } else {
        l
    }
}

/// Tanh-rule LLR that the XOR of the given bits is 0:
/// `2 atanh(∏ tanh(Λ_j / 2))`.
pub fn check_llr(llrs: impl IntoIterator<Item = f64>) -> f64 {
    llr_from_tanh(llrs.into_iter().map(tanh_half).product())
}

/// `Pr{hard decision wrong}` given an LLR magnitude: `1 / (1 + e^{|Λ|})`.
#[inline]
pub fn flip_prob_from_llr(l: f64) -> f64 {
    let a = l.abs();
    if a.is_infinite() {
        0.0
    } else {
        1.0 / (1.0 + a.exp())
    }
}

/// `log2(1 + e^{-l})` without overflow.
#[inline]
fn log2_1p_exp_neg(l: f64) -> f64 {
    if l == f64::INFINITY {
        return 0.0;
    }
    let softplus = (-l).max(0.0) + (-l.abs()).exp().ln_1p();
    softplus / std::f64::consts::LN_2
}

/// A BIOS memoryless channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BiosChannel {
    /// `y = (-1)^x + z`, `z ~ N(0, σ²)`. Symmetry map `π(y) = -y`.
    BpskAwgn { sigma: f64 },
    /// Outputs `0.0`/`1.0`, flipped with probability `p`. Symmetry map `π(y) = 1 ⊕ y`.
    Bsc { p: f64 },
}

impl BiosChannel {
    pub fn awgn(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(Self::BpskAwgn { sigma })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "crossover must lie in [0,1], got {p}"
            )));
        }
        Ok(Self::Bsc { p })
    }

    /// BPSK-AWGN at `SNR_dB = 10 log10(1/σ²)` with unit-energy symbols.
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self::BpskAwgn {
            sigma: 10f64.powf(-snr_db / 20.0),
        }
    }

    /// Applies the symmetry map π.
    #[inline]
    pub fn symmetry(&self, y: f64) -> f64 {
        match self {
            Self::BpskAwgn { .. } => -y,
            Self::Bsc { .. } => 1.0 - y,
        }
    }

    /// Conditional density (AWGN) or mass (BSC) of `y` given input `bit`.
    pub fn density(&self, y: f64, bit: bool) -> f64 {
        match *self {
            Self::BpskAwgn { sigma } => {
                let s = if bit { -1.0 } else { 1.0 };
                let d = y - s;
                (-d * d / (2.0 * sigma * sigma)).exp()
                    / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Self::Bsc { p } => {
                if (y >= 0.5) == bit {
                    1.0 - p
                } else {
                    p
                }
            }
        }
    }

    pub fn transmit<R: Rng + ?Sized>(&self, x: &BitVector, rng: &mut R) -> Vec<f64> {
        match *self {
            Self::BpskAwgn { sigma } => x
                .iter()
                .map(|b| {
                    let s = if b { -1.0 } else { 1.0 };
                    let z: f64 = rng.sample(StandardNormal);
                    s + sigma * z
                })
                .collect(),
            Self::Bsc { p } => x
                .iter()
                .map(|b| {
                    let flipped = rng.random::<f64>() < p;
                    if b ^ flipped {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect(),
        }
    }

    /// LLR of one observation. `y = 0` on a noiseless AWGN channel maps to 0.
    #[inline]
    pub fn llr_scalar(&self, y: f64) -> f64 {
        match *self {
            Self::BpskAwgn { sigma } => {
                if y == 0.0 {
                    0.0
                } else if sigma == 0.0 {
                    y.signum() * f64::INFINITY
                } else {
                    2.0 * y / (sigma * sigma)
                }
            }
            Self::Bsc { p } => {
                let mag = ((1.0 - p) / p).ln();
                if y >= 0.5 {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    pub fn llr(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&v| self.llr_scalar(v)).collect()
    }

    /// Hard decision: AWGN `y < 0 → 1`; BSC the received bit.
    pub fn hard_decision(&self, y: &[f64]) -> BitVector {
        match self {
            Self::BpskAwgn { .. } => y.iter().map(|&v| v < 0.0).collect(),
            Self::Bsc { .. } => y.iter().map(|&v| v >= 0.5).collect(),
        }
    }

    /// The flipping operation: `π(y_j)` where `w_j = 1`, `y_j` elsewhere.
    pub fn flip(&self, y: &[f64], w: &BitVector) -> Result<Vec<f64>> {
        check_len(y.len(), w.len())?;
        let mut out = y.to_vec();
        for j in w.iter_ones() {
            out[j] = self.symmetry(out[j]);
        }
        Ok(out)
    }

    /// Crossover probability of the hard-decision channel, `Q(1/σ)` for AWGN.
    pub fn hard_crossover(&self) -> f64 {
        match *self {
            Self::BpskAwgn { sigma } => {
                if sigma == 0.0 {
                    0.0
                } else {
                    q_function(1.0 / sigma)
                }
            }
            Self::Bsc { p } => p,
        }
    }

    /// `min{P(y|0), P(y|1)} / (P(y|0) + P(y|1))`.
    pub fn posterior_flip_prob(&self, y: f64) -> f64 {
        flip_prob_from_llr(self.llr_scalar(y))
    }

    /// Capacity in bits per use with its standard error.
    ///
    /// The BSC uses the closed form `1 - H2(p)`. Other channels average
    /// `log2 P(Y|0)/P(Y)` over `samples` draws of `Y ~ P(·|0)`.
    pub fn capacity<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> (f64, f64) {
        match *self {
            Self::Bsc { p } => (1.0 - binary_entropy(p), 0.0),
            Self::BpskAwgn { .. } => {
                let zero = BitVector::zeros(1);
                let terms: Vec<f64> = (0..samples.max(1))
                    .map(|_| {
                        let y = self.transmit(&zero, rng)[0];
                        self.capacity_term(self.llr_scalar(y))
                    })
                    .collect();
                sample_std_err(&terms)
            }
        }
    }

    /// `log2 P(y|x) / P(y)` for an observation whose LLR relative to the
    /// transmitted bit is `l`: `1 - log2(1 + e^{-l})`.
    #[inline]
    pub fn capacity_term(&self, l: f64) -> f64 {
        1.0 - log2_1p_exp_neg(l)
    }

    pub fn is_bsc(&self) -> bool {
        matches!(self, Self::Bsc { .. })
    }
}
