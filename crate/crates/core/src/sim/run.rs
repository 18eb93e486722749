use rayon::prelude::*;
use serde::Serialize;

use super::config::{CodeSource, Experiment, Scheme, ShortCodeKind, SimConfig};
use crate::capacity::{capacity_report, CapacityReport, ShortCode};
use crate::channel::BiosChannel;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::ldpc::{alist, LdpcCode};
use crate::random::{
    stat_model, syndrome_histogram, RandomFreeRideCode, SyndromeHistogram, SyndromeStatModel,
};
use crate::rng::{binomial_std_err, stream_rng, MeanAccumulator};
use crate::structured::{build_repetition, build_rm1, lift, StructuredFreeRideCode};
use crate::superposition::{cancel_and_decode, FreeRideCode};

const TRIAL_DOMAIN: u64 = 0x74_7269_616c;
const CODE_DOMAIN: u64 = 0x6672_6565;
const HIST_DOMAIN: u64 = 0x68_6973_746f;
const CAP_DOMAIN: u64 = 0x6361_7063;
/// Trials evaluated together before the stop rule is checked.
const BATCH: u64 = 64;

/// The free-ride code of a configuration.
#[derive(Clone, Debug)]
pub enum SchemeCode {
    Random(RandomFreeRideCode),
    Structured(StructuredFreeRideCode),
}

impl SchemeCode {
    pub fn as_dyn(&self) -> &dyn FreeRideCode {
        match self {
            Self::Random(c) => c,
            Self::Structured(c) => c,
        }
    }
}

pub fn build_code(source: &CodeSource) -> Result<LdpcCode> {
    match source {
        CodeSource::Regular {
            n,
            gamma,
            rho,
            seed,
        } => LdpcCode::construct_regular(*n, *gamma, *rho, *seed),
        CodeSource::Alist { path } => LdpcCode::from_parity_check(alist::read_alist(path)?),
    }
}

/// Builds the extra-bit code; random generators are drawn from a stream
/// keyed by the master seed.
pub fn build_scheme(code: &LdpcCode, cfg: &SimConfig) -> Result<SchemeCode> {
    Ok(match cfg.scheme {
        Scheme::Random => {
            let mut rng = stream_rng(cfg.seed, cfg.k1 as u64, 0, CODE_DOMAIN);
            SchemeCode::Random(RandomFreeRideCode::generate(cfg.k1, code, &mut rng)?)
        }
        Scheme::Rep => SchemeCode::Structured(lift(code, &build_repetition(cfg.k1, code.m())?)?),
        Scheme::Rm1 => SchemeCode::Structured(lift(code, &build_rm1(cfg.k1, code.m())?)?),
    })
}

/// Outcome of one transmission.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialRecord {
    pub extra_word_error: bool,
    pub extra_bit_errors: usize,
    /// `None` when the payload was not decoded.
    pub payload_bit_errors: Option<usize>,
    pub payload_converged: bool,
}

impl TrialRecord {
    fn payload_word_error(&self) -> bool {
        self.payload_bit_errors.is_some_and(|e| e > 0)
    }
}

/// Aggregates for one SNR point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub trials: u64,
    pub word_errors_extra: u64,
    pub bit_errors_extra: u64,
    pub bit_errors_payload: u64,
    pub payload_bits: u64,
    pub word_errors_payload: u64,
    pub wer: f64,
    pub ber: f64,
    pub std_err_wer: f64,
    pub std_err_ber: f64,
    pub wer_payload: f64,
    pub std_err_wer_payload: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub k1: usize,
    pub rows: Vec<SweepRow>,
}

/// Runs trials of `trial` in index order, in parallel batches, until
/// `max_trials` is reached or the running count of `is_error` reaches
/// `max_errors`. The result is the same for any worker count.
fn run_until<T, F, E>(max_trials: u64, max_errors: u64, trial: F, is_error: E) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
    E: Fn(&T) -> bool,
{
    let mut out = Vec::new();
    let mut errors = 0u64;
    let mut next = 0u64;
    while next < max_trials {
        let end = (next + BATCH).min(max_trials);
        let batch = (next..end)
            .into_par_iter()
            .map(&trial)
            .collect::<Result<Vec<T>>>()?;
        for rec in batch {
            errors += u64::from(is_error(&rec));
            out.push(rec);
            if errors >= max_errors {
                return Ok(out);
            }
        }
        next = end;
    }
    Ok(out)
}

struct Transmission {
    u: BitVector,
    v: BitVector,
    w: BitVector,
    y: Vec<f64>,
}

fn transmit(
    code: &LdpcCode,
    frc: &dyn FreeRideCode,
    ch: &BiosChannel,
    seed: u64,
    snr_index: usize,
    trial: u64,
) -> Result<Transmission> {
    let mut rng = stream_rng(seed, snr_index as u64, trial, TRIAL_DOMAIN);
    let u = BitVector::random(code.k(), &mut rng);
    let v = BitVector::random(frc.k1(), &mut rng);
    let w = frc.encode(&v)?;
    let x = &code.encode(&u)? ^ &w;
    let y = ch.transmit(&x, &mut rng);
    Ok(Transmission { u, v, w, y })
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// WER of the extra bits (`decode_payload == false`) or the full
/// successive-cancellation pipeline.
pub fn run_sweep(code: &LdpcCode, frc: &dyn FreeRideCode, cfg: &SimConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let decode_payload = cfg.experiment != Experiment::WerExtra;
    with_pool(cfg.workers, || {
        let rows = cfg
            .snr_db
            .iter()
            .enumerate()
            .map(|(i, &snr)| {
                let ch = BiosChannel::from_snr_db(snr);
                let trial = |t: u64| -> Result<TrialRecord> {
                    let tx = transmit(code, frc, &ch, cfg.seed, i, t)?;
                    let v_hat = frc.decode_extra(code, &ch, &tx.y, cfg.decoder)?;
                    let extra_bit_errors = v_hat.distance(&tx.v);
                    let mut rec = TrialRecord {
                        extra_word_error: extra_bit_errors > 0,
                        extra_bit_errors,
                        ..Default::default()
                    };
                    if decode_payload {
                        let w_hat = frc.encode(&v_hat)?;
                        let (u_hat, res) =
                            cancel_and_decode(code, &ch, &tx.y, &w_hat, cfg.max_iters)?;
                        rec.payload_bit_errors = Some(u_hat.distance(&tx.u));
                        rec.payload_converged = res.converged;
                    }
                    Ok(rec)
                };
                let records = if decode_payload {
                    run_until(
                        cfg.max_trials,
                        cfg.max_errors,
                        trial,
                        TrialRecord::payload_word_error,
                    )?
                } else {
                    run_until(cfg.max_trials, cfg.max_errors, trial, |r| {
                        r.extra_word_error
                    })?
                };
                Ok(summarize(snr, code.k(), frc.k1(), &records))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepResult { k1: frc.k1(), rows })
    })?
}

fn summarize(snr_db: f64, k: usize, k1: usize, records: &[TrialRecord]) -> SweepRow {
    let trials = records.len() as u64;
    let word_errors_extra = records.iter().filter(|r| r.extra_word_error).count() as u64;
    let bit_errors_extra: u64 = records.iter().map(|r| r.extra_bit_errors as u64).sum();
    let decoded = records
        .iter()
        .filter(|r| r.payload_bit_errors.is_some())
        .count() as u64;
    let bit_errors_payload: u64 = records
        .iter()
        .filter_map(|r| r.payload_bit_errors)
        .map(|e| e as u64)
        .sum();
    let word_errors_payload = records.iter().filter(|r| r.payload_word_error()).count() as u64;
    let payload_bits = decoded * k as u64;
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            f64::NAN
        } else {
            num as f64 / den as f64
        }
    };
    let wer = if k1 == 0 {
        f64::NAN
    } else {
        ratio(word_errors_extra, trials)
    };
    let ber = ratio(bit_errors_payload, payload_bits);
    let wer_payload = ratio(word_errors_payload, decoded);
    SweepRow {
        snr_db,
        trials,
        word_errors_extra,
        bit_errors_extra,
        bit_errors_payload,
        payload_bits,
        word_errors_payload,
        wer,
        ber,
        std_err_wer: binomial_std_err(wer, trials),
        std_err_ber: binomial_std_err(ber, payload_bits),
        wer_payload,
        std_err_wer_payload: binomial_std_err(wer_payload, decoded),
    }
}

/// One SNR point of the successive-cancellation bound check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Row {
    pub snr_db: f64,
    pub trials: u64,
    /// Payload WER when the extra codeword is known.
    pub lambda0_genie: f64,
    pub std_err_lambda0_genie: f64,
    /// Extra-bit WER.
    pub lambda1: f64,
    pub std_err_lambda1: f64,
    /// Payload WER of successive cancellation.
    pub lambda0: f64,
    pub std_err_lambda0: f64,
    /// `λ̃0 + λ1 - λ0`.
    pub margin: f64,
    pub std_err_margin: f64,
    pub ber_genie: f64,
    pub std_err_ber_genie: f64,
    pub ber_sc: f64,
    pub std_err_ber_sc: f64,
    /// Mean of the per-trial difference of SC and genie payload BER.
    pub ber_degradation: f64,
    pub std_err_ber_degradation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Report {
    pub k1: usize,
    pub rows: Vec<Prop1Row>,
}

#[derive(Clone, Copy, Debug, Default)]
struct Prop1Trial {
    genie_bits: usize,
    sc_bits: usize,
    extra_error: bool,
}

/// Measures genie-aided payload WER, extra-bit WER and SC payload WER on the
/// same noise realizations. Stops on payload errors of SC decoding.
pub fn run_prop1(code: &LdpcCode, frc: &dyn FreeRideCode, cfg: &SimConfig) -> Result<Prop1Report> {
    cfg.validate()?;
    with_pool(cfg.workers, || {
        let rows = cfg
            .snr_db
            .iter()
            .enumerate()
            .map(|(i, &snr)| {
                let ch = BiosChannel::from_snr_db(snr);
                let trial = |t: u64| -> Result<Prop1Trial> {
                    let tx = transmit(code, frc, &ch, cfg.seed, i, t)?;
                    let v_hat = frc.decode_extra(code, &ch, &tx.y, cfg.decoder)?;
                    let (u_genie, _) = cancel_and_decode(code, &ch, &tx.y, &tx.w, cfg.max_iters)?;
                    let genie_bits = u_genie.distance(&tx.u);
                    let extra_error = v_hat != tx.v;
                    let sc_bits = if extra_error {
                        let w_hat = frc.encode(&v_hat)?;
                        cancel_and_decode(code, &ch, &tx.y, &w_hat, cfg.max_iters)?
                            .0
                            .distance(&tx.u)
                    } else {
                        genie_bits
                    };
                    Ok(Prop1Trial {
                        genie_bits,
                        sc_bits,
                        extra_error,
                    })
                };
                let recs = run_until(cfg.max_trials, cfg.max_errors, trial, |r| r.sc_bits > 0)?;
                Ok(prop1_row(snr, code.k(), &recs))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Prop1Report { k1: frc.k1(), rows })
    })?
}

fn prop1_row(snr_db: f64, k: usize, recs: &[Prop1Trial]) -> Prop1Row {
    let mut genie = MeanAccumulator::default();
    let mut extra = MeanAccumulator::default();
    let mut sc = MeanAccumulator::default();
    let mut margin = MeanAccumulator::default();
    let mut ber_g = MeanAccumulator::default();
    let mut ber_sc = MeanAccumulator::default();
    let mut ber_diff = MeanAccumulator::default();
    for r in recs {
        let (g, e, s) = (
            f64::from(u8::from(r.genie_bits > 0)),
            f64::from(u8::from(r.extra_error)),
            f64::from(u8::from(r.sc_bits > 0)),
        );
        genie.push(g);
        extra.push(e);
        sc.push(s);
        margin.push(g + e - s);
        let (bg, bs) = (r.genie_bits as f64 / k as f64, r.sc_bits as f64 / k as f64);
        ber_g.push(bg);
        ber_sc.push(bs);
        ber_diff.push(bs - bg);
    }
    let trials = recs.len() as u64;
    let binom = |acc: &MeanAccumulator| binomial_std_err(acc.mean(), trials);
    Prop1Row {
        snr_db,
        trials,
        lambda0_genie: genie.mean(),
        std_err_lambda0_genie: binom(&genie),
        lambda1: extra.mean(),
        std_err_lambda1: binom(&extra),
        lambda0: sc.mean(),
        std_err_lambda0: binom(&sc),
        margin: margin.mean(),
        std_err_margin: margin.std_err(),
        ber_genie: ber_g.mean(),
        std_err_ber_genie: ber_g.std_err(),
        ber_sc: ber_sc.mean(),
        std_err_ber_sc: ber_sc.std_err(),
        ber_degradation: ber_diff.mean(),
        std_err_ber_degradation: ber_diff.std_err(),
    }
}

/// Per-SNR unsatisfied-check histograms with the model they are compared to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramPoint {
    pub snr_db: f64,
    pub model: SyndromeStatModel,
    pub histogram: SyndromeHistogram,
}

pub fn run_histogram(
    code: &LdpcCode,
    frc: &RandomFreeRideCode,
    cfg: &SimConfig,
) -> Result<Vec<HistogramPoint>> {
    cfg.validate()?;
    with_pool(cfg.workers, || {
        cfg.snr_db
            .iter()
            .enumerate()
            .map(|(i, &snr)| {
                let ch = BiosChannel::from_snr_db(snr);
                let mut rng = stream_rng(cfg.seed, i as u64, 0, HIST_DOMAIN);
                Ok(HistogramPoint {
                    snr_db: snr,
                    model: stat_model(code, &ch)?,
                    histogram: syndrome_histogram(code, frc, &ch, cfg.max_trials, &mut rng)?,
                })
            })
            .collect()
    })?
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityPoint {
    pub snr_db: f64,
    pub rate: f64,
    pub report: CapacityReport,
}

/// Capacity sweep; every point reuses the same random stream so the curves
/// are smooth in SNR.
pub fn run_capacity(cfg: &SimConfig) -> Result<Vec<CapacityPoint>> {
    cfg.validate()?;
    let code = match cfg.short_code {
        ShortCodeKind::Rep2 => ShortCode::repetition(2)?,
        ShortCodeKind::Hamming8 => ShortCode::extended_hamming_8_4(),
    };
    with_pool(cfg.workers, || {
        cfg.snr_db
            .iter()
            .map(|&snr| {
                let mut rng = stream_rng(cfg.seed, 0, 0, CAP_DOMAIN);
                Ok(CapacityPoint {
                    snr_db: snr,
                    rate: code.rate(),
                    report: capacity_report(
                        &code,
                        &BiosChannel::from_snr_db(snr),
                        cfg.samples,
                        &mut rng,
                    )?,
                })
            })
            .collect()
    })?
}

/// Results of any experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "result", rename_all = "snake_case")]
pub enum ExperimentOutput {
    Sweep(SweepResult),
    Prop1(Prop1Report),
    Histogram(Vec<HistogramPoint>),
    Capacity(Vec<CapacityPoint>),
}

/// Builds the codes named by `cfg` and runs its experiment.
pub fn run(cfg: &SimConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    if cfg.experiment == Experiment::CapacityCurve {
        return Ok(ExperimentOutput::Capacity(run_capacity(cfg)?));
    }
    let code = build_code(&cfg.code)?;
    let scheme = build_scheme(&code, cfg)?;
    Ok(match cfg.experiment {
        Experiment::Histogram => {
            let SchemeCode::Random(frc) = &scheme else {
                return Err(Error::InvalidParameter(
                    "histogram needs the random scheme".into(),
                ));
            };
            ExperimentOutput::Histogram(run_histogram(&code, frc, cfg)?)
        }
        Experiment::Prop1Check => ExperimentOutput::Prop1(run_prop1(&code, scheme.as_dyn(), cfg)?),
        _ => ExperimentOutput::Sweep(run_sweep(&code, scheme.as_dyn(), cfg)?),
    })
}
