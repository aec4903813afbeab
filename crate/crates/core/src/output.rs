//! CSV and JSON rendering of experiment results.
//!
//! CSV schemas (one header line, then data rows):
//!
//! | command                | columns                                                            |
//! |------------------------|--------------------------------------------------------------------|
//! | `array-param`          | `n_elements, fov_deg, s, stderr, samples`                          |
//! | `ineffectiveness`      | `m, theory, empirical, stderr`                                     |
//! | `effective-components` | `m, theory, empirical, stderr`                                     |
//! | `snr-sweep`            | `m, mrc_theory_db, mrc_sim_db, single_theory_db, single_sim_db`    |
//! | `blockage-cdf`         | `beam_kind, snr_db` (one row per trial, ascending per beam)        |
//! | `beam-pattern`         | `theta_deg, gain_db`                                               |
//! | theory curves          | `m, value`                                                         |
//!
//! JSON output is a single object `{"run": {...}, "config": {...}, "results": {...}}`.
//! Floats use Rust's shortest round-trip formatting, so output is byte-stable
//! for a fixed configuration and seed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::beam::{BeamKind, PatternSample};
use crate::montecarlo::{BlockagePoint, EffectivenessPoint, SnrPoint, SweepResult};
use crate::theory::{ArrayParameterEstimate, TheoryCurvePoint};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A header plus string-formatted rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(&self.header)?;
        for row in &self.rows {
            wtr.write_record(row)?;
        }
        wtr.flush()?;
        wtr.into_inner()
            .map_err(|e| crate::Error::Io(e.into_error()))
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrayParamRow {
    pub n_elements: usize,
    pub fov_deg: f64,
    #[serde(flatten)]
    pub estimate: ArrayParameterEstimate,
}

pub fn array_param_table(rows: &[ArrayParamRow]) -> Table {
    let mut t = Table::new(&["n_elements", "fov_deg", "s", "stderr", "samples"]);
    for r in rows {
        t.push(vec![
            r.n_elements.to_string(),
            num(r.fov_deg),
            num(r.estimate.s),
            num(r.estimate.stderr),
            r.estimate.samples.to_string(),
        ]);
    }
    t
}

pub fn ineffectiveness_table(result: &SweepResult<EffectivenessPoint>) -> Table {
    let mut t = Table::new(&["m", "theory", "empirical", "stderr"]);
    for p in &result.points {
        t.push(vec![
            p.m_paths.to_string(),
            num(p.theory_p_ineff),
            num(p.p_ineff),
            num(p.p_ineff_stderr),
        ]);
    }
    t
}

pub fn effective_components_table(result: &SweepResult<EffectivenessPoint>) -> Table {
    let mut t = Table::new(&["m", "theory", "empirical", "stderr"]);
    for p in &result.points {
        t.push(vec![
            p.m_paths.to_string(),
            num(p.theory_count),
            num(p.mean_count),
            num(p.count_stderr),
        ]);
    }
    t
}

pub fn snr_table(result: &SweepResult<SnrPoint>) -> Table {
    let mut t = Table::new(&[
        "m",
        "mrc_theory_db",
        "mrc_sim_db",
        "single_theory_db",
        "single_sim_db",
    ]);
    for p in &result.points {
        t.push(vec![
            p.m_paths.to_string(),
            num(p.mrc_theory_db),
            num(p.mrc_sim_db),
            num(p.single_theory_db),
            num(p.single_sim_db),
        ]);
    }
    t
}

/// One row per sample: every MRC sample (ascending), then every single-beam sample.
pub fn blockage_table(result: &SweepResult<BlockagePoint>) -> Table {
    let mut t = Table::new(&["beam_kind", "snr_db"]);
    for p in &result.points {
        for (kind, samples) in [
            (BeamKind::Mrc, &p.mrc_snr_db),
            (BeamKind::SingleDirection, &p.single_snr_db),
        ] {
            for v in samples {
                t.push(vec![kind.label().to_string(), num(*v)]);
            }
        }
    }
    t
}

pub fn pattern_table(pattern: &[PatternSample]) -> Table {
    let mut t = Table::new(&["theta_deg", "gain_db"]);
    for p in pattern {
        t.push(vec![num(p.theta_deg), num(p.gain_db)]);
    }
    t
}

pub fn theory_table(curve: &[TheoryCurvePoint]) -> Table {
    let mut t = Table::new(&["m", "value"]);
    for p in curve {
        t.push(vec![p.m_paths.to_string(), num(p.value)]);
    }
    t
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
}

impl RunMetadata {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonDocument<'a, C: Serialize, R: Serialize> {
    pub run: RunMetadata,
    pub config: &'a C,
    pub results: &'a R,
}

/// Pretty-printed JSON document echoing the full configuration.
pub fn to_json<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    results: &R,
) -> Result<Vec<u8>> {
    let doc = JsonDocument {
        run: RunMetadata::new(command),
        config,
        results,
    };
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to `path`, or to standard output when `path` is `None` or `-`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        _ => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            lock.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sweep_is_header_only() {
        let result: SweepResult<SnrPoint> = SweepResult {
            array_parameter: None,
            points: vec![],
        };
        let csv = String::from_utf8(snr_table(&result).to_csv().unwrap()).unwrap();
        assert_eq!(
            csv,
            "m,mrc_theory_db,mrc_sim_db,single_theory_db,single_sim_db\n"
        );
        let blk: SweepResult<BlockagePoint> = SweepResult {
            array_parameter: None,
            points: vec![],
        };
        assert_eq!(
            String::from_utf8(blockage_table(&blk).to_csv().unwrap()).unwrap(),
            "beam_kind,snr_db\n"
        );
    }

    #[test]
    fn array_param_row_format() {
        let rows = [ArrayParamRow {
            n_elements: 8,
            fov_deg: 180.0,
            estimate: ArrayParameterEstimate {
                s: 0.25,
                samples: 100,
                stderr: 0.5,
            },
        }];
        let csv = String::from_utf8(array_param_table(&rows).to_csv().unwrap()).unwrap();
        assert_eq!(
            csv,
            "n_elements,fov_deg,s,stderr,samples\n8,180,0.25,0.5,100\n"
        );
    }

    #[test]
    fn json_echoes_config() {
        let cfg = crate::ExperimentConfig::new(8, vec![1, 2], 9);
        let bytes = to_json("snr-sweep", &cfg, &serde_json::json!({"x": 1})).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["run"]["command"], "snr-sweep");
        assert_eq!(v["config"]["n_elements"], 8);
        assert_eq!(v["config"]["seed"], 9);
        assert!(v["config"].get("workers").is_none());
        assert_eq!(v["results"]["x"], 1);
    }

    #[test]
    fn write_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_output(b"a,b\n", Some(&path)).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"a,b\n");
        assert!(write_output(b"x", Some(&dir.path().join("missing/out.csv"))).is_err());
    }
}
