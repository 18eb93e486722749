use crate::channel::{check_llr, clamp_llr, BiosChannel};
use crate::error::{check_len, Result};
use crate::gf2::BitVector;
use crate::ldpc::LdpcCode;
use crate::superposition::DecisionMode;

/// Observation of `w Hᵀ` through the syndrome channel
/// `ŷHᵀ = wHᵀ ⊕ ẑHᵀ`, treated as memoryless.
#[derive(Clone, Debug)]
pub struct SyndromeChannelModel {
    /// `ŷHᵀ`.
    pub hard_syndrome: BitVector,
    /// `Pr{(ẑHᵀ)_i = 1}` per check.
    pub cross_probs: Vec<f64>,
    /// `ln Pr{(wHᵀ)_i = 0 | y} / Pr{(wHᵀ)_i = 1 | y}`, clamped.
    pub llrs: Vec<f64>,
}

/// Builds the syndrome-channel model for the observation `y`.
///
/// Hard decisions see every check as a BSC with the unsatisfied-check
/// probability `½[1 - (1 - 2p_b)^ρ_i]`. Soft decisions combine the per-bit
/// posteriors of each check with the tanh rule.
pub fn syndrome_channel(
    code: &LdpcCode,
    ch: &BiosChannel,
    y: &[f64],
    mode: DecisionMode,
) -> Result<SyndromeChannelModel> {
    check_len(code.n(), y.len())?;
    let hard_syndrome = code.syndrome(&ch.hard_decision(y))?;
    let h = code.h();
    let (cross_probs, llrs) = match mode {
        DecisionMode::Hdd => {
            let a = 1.0 - 2.0 * ch.hard_crossover();
            h.iter_rows()
                .zip(hard_syndrome.iter())
                .map(|(row, s)| {
                    let p = 0.5 * (1.0 - a.powi(row.len() as i32));
                    let mag = clamp_llr(((1.0 - p) / p).ln());
                    (p, if s { -mag } else { mag })
                })
                .unzip()
        }
        DecisionMode::Sdd => {
            let llr = ch.llr(y);
            h.iter_rows()
                .map(|row| {
                    let keep: f64 = row
                        .iter()
                        .map(|&j| 1.0 - 2.0 * ch.posterior_flip_prob(y[j]))
                        .product();
                    (0.5 * (1.0 - keep), check_llr(row.iter().map(|&j| llr[j])))
                })
                .unzip()
        }
    };
    Ok(SyndromeChannelModel {
        hard_syndrome,
        cross_probs,
        llrs,
    })
}
