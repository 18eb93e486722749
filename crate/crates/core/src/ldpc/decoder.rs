//! Flooding-schedule sum-product decoding.

use super::LdpcCode;
use crate::channel::{clamp_llr, llr_from_tanh, tanh_half};
use crate::error::{check_len, Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub codeword: BitVector,
    /// The returned hard decision satisfies every parity check and no
    /// posterior LLR is exactly zero.
    pub converged: bool,
    /// Completed message-passing iterations; 0 if the channel hard
    /// decision was already a codeword.
    pub iterations: usize,
}

impl LdpcCode {
    /// Sum-product decoding of channel LLRs (`ln P(y|0)/P(y|1)`).
    pub fn decode(&self, llr: &[f64], max_iters: usize) -> Result<DecodeResult> {
        check_len(self.n(), llr.len())?;
        if max_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_iters must be at least 1".into(),
            ));
        }
        let g = &self.graph;
        let channel: Vec<f64> = llr.iter().map(|&l| clamp_llr(l)).collect();
        let mut hard: Vec<u8> = channel.iter().map(|&l| u8::from(l < 0.0)).collect();
        // A zero posterior carries no decision; such a word never counts as converged.
        let mut undecided = channel.contains(&0.0);
        if !undecided && self.checks_satisfied(&hard) {
            return Ok(self.result(&hard, true, 0));
        }

        let edges = g.edge_var.len();
        let mut v2c: Vec<f64> = g.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; edges];
        let mut t = Vec::new();

        for iter in 1..=max_iters {
            undecided = false;
            for w in g.check_start.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                t.clear();
                t.extend(v2c[lo..hi].iter().map(|&l| tanh_half(l)));
                // Exclusive products: suffix pass into c2v, then prefix pass.
                let mut acc = 1.0;
                for k in (0..t.len()).rev() {
                    c2v[lo + k] = acc;
                    acc *= t[k];
                }
                let mut acc = 1.0;
                for k in 0..t.len() {
                    c2v[lo + k] = llr_from_tanh(acc * c2v[lo + k]);
                    acc *= t[k];
                }
            }
            for v in 0..self.n() {
                let es = &g.var_edges[g.var_start[v]..g.var_start[v + 1]];
                let total = channel[v] + es.iter().map(|&e| c2v[e]).sum::<f64>();
                for &e in es {
                    v2c[e] = total - c2v[e];
                }
                hard[v] = u8::from(total < 0.0);
                undecided |= total == 0.0;
            }
            if !undecided && self.checks_satisfied(&hard) {
                return Ok(self.result(&hard, true, iter));
            }
        }
        Ok(self.result(&hard, false, max_iters))
    }

    fn result(&self, hard: &[u8], converged: bool, iterations: usize) -> DecodeResult {
        DecodeResult {
            codeword: hard.iter().map(|&b| b == 1).collect(),
            converged,
            iterations,
        }
    }
}
