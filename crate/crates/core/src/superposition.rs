//! Shared interface of free-ride codes and successive-cancellation decoding.

use serde::{Deserialize, Serialize};

use crate::channel::BiosChannel;
use crate::error::Result;
use crate::gf2::{BitVector, DenseBitMatrix};
use crate::ldpc::{DecodeResult, LdpcCode};

/// Hard- or soft-decision decoding of the extra bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionMode {
    Hdd,
    Sdd,
}

/// A code `C1` for extra bits superimposed on the payload codeword.
pub trait FreeRideCode: Sync {
    fn k1(&self) -> usize;

    /// `k1 × n` generator; `w = v G1`.
    fn g1(&self) -> &DenseBitMatrix;

    fn encode(&self, v: &BitVector) -> Result<BitVector> {
        self.g1().left_mul(v)
    }

    /// Estimates `v` from channel outputs `y` of `x = c ⊕ v G1`.
    fn decode_extra(
        &self,
        code: &LdpcCode,
        ch: &BiosChannel,
        y: &[f64],
        mode: DecisionMode,
    ) -> Result<BitVector>;
}

/// Outcome of decoding both layers.
#[derive(Clone, Debug)]
pub struct ScOutcome {
    pub extra: BitVector,
    pub payload: BitVector,
    pub ldpc: DecodeResult,
}

/// Flips `w` out of `y` and runs the payload decoder on the result.
pub fn cancel_and_decode(
    code: &LdpcCode,
    ch: &BiosChannel,
    y: &[f64],
    w: &BitVector,
    max_iters: usize,
) -> Result<(BitVector, DecodeResult)> {
    let cleaned = ch.flip(y, w)?;
    let res = code.decode(&ch.llr(&cleaned), max_iters)?;
    let payload = code.extract_info(&res.codeword)?;
    Ok((payload, res))
}

/// Decodes the extra bits, cancels their codeword, then decodes the payload.
pub fn successive_cancellation<F: FreeRideCode + ?Sized>(
    code: &LdpcCode,
    frc: &F,
    ch: &BiosChannel,
    y: &[f64],
    mode: DecisionMode,
    max_iters: usize,
) -> Result<ScOutcome> {
    let extra = frc.decode_extra(code, ch, y, mode)?;
    let w = frc.encode(&extra)?;
    let (payload, ldpc) = cancel_and_decode(code, ch, y, &w, max_iters)?;
    Ok(ScOutcome {
        extra,
        payload,
        ldpc,
    })
}
