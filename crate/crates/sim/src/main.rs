use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use freeride::sim::{self, CodeSource, Experiment, Scheme, ShortCodeKind, SimConfig};
use freeride::DecisionMode;

/// Monte Carlo simulator for extra bits superimposed on LDPC-coded payloads.
#[derive(Parser, Debug)]
#[command(name = "freeride", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unsatisfied-check histograms of the correct and a wrong candidate.
    Histogram(Common),
    /// Word error rate of the extra bits.
    Wer(Common),
    /// Payload bit error rate under successive cancellation.
    Ber(Common),
    /// Accessible capacity of a short payload code.
    Capacity(Common),
    /// Genie-aided vs successive-cancellation payload WER.
    Prop1(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Random,
    Rep,
    Rm1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecoderArg {
    Hdd,
    Sdd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShortCodeArg {
    Rep2,
    Hamming8,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 8064)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    gamma: usize,
    #[arg(long, default_value_t = 6)]
    rho: usize,
    /// Seed of the parity-check construction.
    #[arg(long, default_value_t = 1)]
    code_seed: u64,
    /// Read H from an alist file instead of constructing one.
    #[arg(long, value_name = "PATH")]
    alist: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Random)]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 5)]
    k1: usize,
    #[arg(long, value_enum, default_value_t = DecoderArg::Hdd)]
    decoder: DecoderArg,
    /// `START:STOP:STEP`, a comma-separated list, or one value (dB).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    snr: String,
    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 200)]
    max_errors: u64,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Payload code of the capacity experiment.
    #[arg(long, value_enum, default_value_t = ShortCodeArg::Rep2)]
    short_code: ShortCodeArg,
    /// Monte Carlo samples per capacity point.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// CSV output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write a JSON mirror with the full configuration.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl Common {
    fn into_config(
        self,
        experiment: Experiment,
    ) -> Result<(SimConfig, Option<PathBuf>, Option<PathBuf>)> {
        let code = match self.alist {
            Some(path) => CodeSource::Alist { path },
            None => CodeSource::Regular {
                n: self.n,
                gamma: self.gamma,
                rho: self.rho,
                seed: self.code_seed,
            },
        };
        let cfg = SimConfig {
            experiment,
            code,
            scheme: match self.scheme {
                SchemeArg::Random => Scheme::Random,
                SchemeArg::Rep => Scheme::Rep,
                SchemeArg::Rm1 => Scheme::Rm1,
            },
            k1: self.k1,
            decoder: match self.decoder {
                DecoderArg::Hdd => DecisionMode::Hdd,
                DecoderArg::Sdd => DecisionMode::Sdd,
            },
            snr_db: sim::parse_snr_range(&self.snr)?,
            max_trials: self.max_trials,
            max_errors: self.max_errors,
            max_iters: self.max_iters,
            seed: self.seed,
            short_code: match self.short_code {
                ShortCodeArg::Rep2 => ShortCodeKind::Rep2,
                ShortCodeArg::Hamming8 => ShortCodeKind::Hamming8,
            },
            samples: self.samples,
            workers: self.workers,
        };
        cfg.validate()?;
        Ok((cfg, self.out, self.json))
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::Histogram(c) => (Experiment::Histogram, c),
        Command::Wer(c) => (Experiment::WerExtra, c),
        Command::Ber(c) => (Experiment::BerPayload, c),
        Command::Capacity(c) => (Experiment::CapacityCurve, c),
        Command::Prop1(c) => (Experiment::Prop1Check, c),
    };
    let (cfg, out, json) = common.into_config(experiment)?;
    let result = sim::run(&cfg)?;
    match &out {
        Some(path) => sim::write_csv(path, &cfg, &result)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", sim::to_csv(&cfg, &result)),
    }
    if let Some(path) = &json {
        sim::write_json(path, &cfg, &result)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
