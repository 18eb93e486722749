//! Monte Carlo experiment harness.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_snr_range, CodeSource, Experiment, Scheme, ShortCodeKind, SimConfig};
pub use output::{to_csv, to_json, write_csv, write_json};
pub use run::{
    build_code, build_scheme, run, run_capacity, run_histogram, run_prop1, run_sweep,
    CapacityPoint, ExperimentOutput, HistogramPoint, Prop1Report, Prop1Row, SchemeCode,
    SweepResult, SweepRow,
};
