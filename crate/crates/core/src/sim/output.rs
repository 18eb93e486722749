use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::SimConfig;
use super::run::ExperimentOutput;
use crate::error::Result;

/// CSV text of an experiment. Every row starts with the master seed and the
/// config hash so it can be regenerated on its own.
pub fn to_csv(cfg: &SimConfig, out: &ExperimentOutput) -> String {
    let prefix = format!("{},{}", cfg.seed, cfg.hash());
    let mut table = Table::default();
    match out {
        ExperimentOutput::Sweep(s) => {
            let extra = s.k1 > 0;
            let mut header = vec!["snr_db", "trials"];
            if extra {
                header.extend(["word_errors_extra", "bit_errors_extra"]);
            }
            header.extend(["bit_errors_payload", "payload_bits", "word_errors_payload"]);
            if extra {
                header.push("wer");
            }
            header.extend(["ber"]);
            if extra {
                header.push("std_err_wer");
            }
            header.extend(["std_err_ber", "wer_payload", "std_err_wer_payload"]);
            table.header(&header);
            for r in &s.rows {
                let mut row = vec![num(r.snr_db), r.trials.to_string()];
                if extra {
                    row.extend([
                        r.word_errors_extra.to_string(),
                        r.bit_errors_extra.to_string(),
                    ]);
                }
                row.extend([
                    r.bit_errors_payload.to_string(),
                    r.payload_bits.to_string(),
                    r.word_errors_payload.to_string(),
                ]);
                if extra {
                    row.push(num(r.wer));
                }
                row.push(num(r.ber));
                if extra {
                    row.push(num(r.std_err_wer));
                }
                row.extend([
                    num(r.std_err_ber),
                    num(r.wer_payload),
                    num(r.std_err_wer_payload),
                ]);
                table.row(row);
            }
        }
        ExperimentOutput::Prop1(p) => {
            table.header(&[
                "snr_db",
                "trials",
                "lambda0_genie",
                "std_err_lambda0_genie",
                "lambda1",
                "std_err_lambda1",
                "lambda0",
                "std_err_lambda0",
                "margin",
                "std_err_margin",
                "ber_genie",
                "std_err_ber_genie",
                "ber_sc",
                "std_err_ber_sc",
                "ber_degradation",
                "std_err_ber_degradation",
            ]);
            for r in &p.rows {
                table.row(vec![
                    num(r.snr_db),
                    r.trials.to_string(),
                    num(r.lambda0_genie),
                    num(r.std_err_lambda0_genie),
                    num(r.lambda1),
                    num(r.std_err_lambda1),
                    num(r.lambda0),
                    num(r.std_err_lambda0),
                    num(r.margin),
                    num(r.std_err_margin),
                    num(r.ber_genie),
                    num(r.std_err_ber_genie),
                    num(r.ber_sc),
                    num(r.std_err_ber_sc),
                    num(r.ber_degradation),
                    num(r.std_err_ber_degradation),
                ]);
            }
        }
        ExperimentOutput::Histogram(points) => {
            table.header(&["snr_db", "n_unsat", "count_correct", "count_wrong"]);
            for p in points {
                let h = &p.histogram;
                for (n, (c, w)) in h.correct.iter().zip(&h.wrong).enumerate() {
                    if *c > 0 || *w > 0 {
                        table.row(vec![
                            num(p.snr_db),
                            n.to_string(),
                            c.to_string(),
                            w.to_string(),
                        ]);
                    }
                }
            }
        }
        ExperimentOutput::Capacity(points) => {
            table.header(&[
                "snr_db",
                "rate",
                "samples",
                "c_bios",
                "std_err_c_bios",
                "mutual_information",
                "std_err_mutual_information",
                "accessible",
                "std_err_accessible",
                "lower_bound",
                "std_err_lower_bound",
            ]);
            for p in points {
                let r = &p.report;
                table.row(vec![
                    num(p.snr_db),
                    num(p.rate),
                    r.bios.samples.to_string(),
                    num(r.bios.value),
                    num(r.bios.std_err),
                    num(r.mutual_information.value),
                    num(r.mutual_information.std_err),
                    num(r.accessible.value),
                    num(r.accessible.std_err),
                    num(r.lower_bound.value),
                    num(r.lower_bound.std_err),
                ]);
            }
        }
    }
    table.render(&prefix)
}

#[derive(Serialize)]
struct JsonMirror<'a> {
    config: &'a SimConfig,
    config_hash: String,
    output: &'a ExperimentOutput,
}

/// Pretty JSON with the full configuration echoed next to the results.
pub fn to_json(cfg: &SimConfig, out: &ExperimentOutput) -> Result<String> {
    let mirror = JsonMirror {
        config: cfg,
        config_hash: cfg.hash(),
        output: out,
    };
    serde_json::to_string_pretty(&mirror)
        .map_err(|e| crate::Error::InvalidParameter(format!("json: {e}")))
}

pub fn write_csv(path: &Path, cfg: &SimConfig, out: &ExperimentOutput) -> Result<()> {
    std::fs::write(path, to_csv(cfg, out))?;
    Ok(())
}

pub fn write_json(path: &Path, cfg: &SimConfig, out: &ExperimentOutput) -> Result<()> {
    std::fs::write(path, to_json(cfg, out)?)?;
    Ok(())
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

#[derive(Default)]
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn header(&mut self, cols: &[&str]) {
        self.header = cols.iter().map(|s| s.to_string()).collect();
    }

    fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    fn render(&self, prefix: &str) -> String {
        let mut s = format!("seed,config_hash,{}\n", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{prefix},{}", r.join(","));
        }
        s
    }
}
