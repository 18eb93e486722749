//! Free-ride transmission of extra bits superimposed on LDPC-coded payloads.
//!
//! A payload codeword `c = u G0` and an extra codeword `w = v G1` are added
//! over GF(2) and sent over a binary-input output-symmetric channel. The
//! receiver decodes `v` from the syndrome of the hard decisions, flips `w`
//! out of the channel observations and then decodes the payload.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod gf2;
pub mod ldpc;
pub mod random;
pub mod rng;
pub mod sim;
pub mod structured;
pub mod superposition;

pub use channel::BiosChannel;
pub use error::{Error, Result};
pub use gf2::{BitVector, DenseBitMatrix, SparseBitMatrix};
pub use ldpc::{DecodeResult, LdpcCode};
pub use random::RandomFreeRideCode;
pub use structured::{StructuredFreeRideCode, SyndromeCode};
pub use superposition::{successive_cancellation, DecisionMode, FreeRideCode};
