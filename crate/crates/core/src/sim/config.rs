use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::superposition::DecisionMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Histogram,
    WerExtra,
    BerPayload,
    CapacityCurve,
    Prop1Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Random,
    Rep,
    Rm1,
}

/// Short payload codes for the capacity experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShortCodeKind {
    Rep2,
    Hamming8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CodeSource {
    Regular {
        n: usize,
        gamma: usize,
        rho: usize,
        seed: u64,
    },
    Alist {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub experiment: Experiment,
    pub code: CodeSource,
    pub scheme: Scheme,
    pub k1: usize,
    pub decoder: DecisionMode,
    pub snr_db: Vec<f64>,
    pub max_trials: u64,
    pub max_errors: u64,
    pub max_iters: usize,
    pub seed: u64,
    pub short_code: ShortCodeKind,
    /// Monte Carlo draws per point of the capacity experiment.
    pub samples: usize,
    /// Worker threads; 0 uses every core. Never affects results.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::WerExtra,
            code: CodeSource::Regular {
                n: 8064,
                gamma: 3,
                rho: 6,
                seed: 1,
            },
            scheme: Scheme::Random,
            k1: 5,
            decoder: DecisionMode::Hdd,
            snr_db: vec![0.0],
            max_trials: 10_000_000,
            max_errors: 200,
            max_iters: 50,
            seed: 1,
            short_code: ShortCodeKind::Rep2,
            samples: 1_000_000,
            workers: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.snr_db.is_empty() {
            return bad("snr list must not be empty");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr values must be finite");
        }
        if self.max_trials == 0 || self.max_errors == 0 {
            return bad("stop rule must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        match self.experiment {
            Experiment::CapacityCurve => {
                if self.samples == 0 {
                    return bad("samples must be positive");
                }
            }
            Experiment::Histogram => {
                if self.scheme != Scheme::Random || self.k1 == 0 {
                    return bad("histogram needs the random scheme with k1 >= 1");
                }
            }
            Experiment::WerExtra | Experiment::Prop1Check => {
                if self.k1 == 0 {
                    return bad("k1 must be at least 1");
                }
            }
            Experiment::BerPayload => {}
        }
        if self.k1 == 0 && self.scheme != Scheme::Random {
            return bad("structured schemes need k1 >= 1");
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form (worker count excluded).
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Parses `START:STOP:STEP` (inclusive, with tolerance for rounding), a
/// comma-separated list, or a single value.
pub fn parse_snr_range(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("bad number {s:?} in snr spec")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[..] {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 || stop < start {
                return Err(Error::InvalidParameter(format!("bad snr range {spec:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(Error::InvalidParameter(format!("bad snr spec {spec:?}"))),
    }
}
