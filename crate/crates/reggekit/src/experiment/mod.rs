//! Experiment driver: JSON configs in, CSV/JSON artifacts out.
//!
//! Each experiment id runs a fixed suite of cases and judges them against
//! the tolerances in the config (or the documented defaults). The driver is
//! deterministic for a fixed config; `--deterministic` additionally forces
//! single-threaded fixed-order reduction so CSV output is byte-identical
//! across machines.

mod fixtures;
mod runs;

pub use fixtures::{generate_fixture, FIXTURE_KINDS};

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cone::{GridSpec, QuadSpec};
use crate::error::{Error, Result};
use crate::io::{fmt_float, write_json};

pub const EXPERIMENT_IDS: [&str; 11] = [
    "identity-check",
    "defect-order",
    "radial-gauge",
    "regge-action",
    "deficit-table",
    "cone-integral",
    "cone-holonomy",
    "delta-convergence",
    "hinge3d-invariants",
    "hinge3d-convergence",
    "critical-search",
];

/// One experiment run. Unknown keys are rejected; every tolerance must be
/// positive. Paths are resolved relative to the process working directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// fan JSON (cone-* and hinge3d-* experiments); a canonical built-in
    /// fixture is used when omitted
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan_file: Option<PathBuf>,
    /// complex JSON (regge-action, deficit-table, critical-search)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_file: Option<PathBuf>,
    /// polynomial connection JSON (identity-check, defect-order,
    /// radial-gauge); seeded fields are generated when omitted
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// number of seeded cases where the experiment is a seeded suite
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// per-hinge reference deficit for deficit-table
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_deficit: Option<f64>,
    /// reference total action for regge-action
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_total: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadSpec>,
}

impl ExperimentConfig {
    pub fn minimal(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            fan_file: None,
            complex_file: None,
            field_file: None,
            seed: None,
            cases: None,
            quad_order: None,
            transport_steps: None,
            eps: None,
            eps_list: None,
            h_list: None,
            tolerance: None,
            reference_deficit: None,
            reference_total: None,
            grid: None,
            quad: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !EXPERIMENT_IDS.contains(&self.experiment.as_str()) {
            return Err(Error::Config(format!(
                "unknown experiment {:?}; valid ids: {}",
                self.experiment,
                EXPERIMENT_IDS.join(", ")
            )));
        }
        for (name, t) in [
            ("tolerance", self.tolerance),
            ("eps", self.eps),
            ("reference_deficit", None),
        ] {
            if let Some(v) = t {
                if !(v > 0.0) {
                    return Err(Error::Config(format!("{name} must be > 0, got {v}")));
                }
            }
            let _ = name;
        }
        for list in [&self.eps_list, &self.h_list] {
            if let Some(l) = list {
                if l.is_empty() || l.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::Config(
                        "eps_list / h_list entries must be positive and non-empty".into(),
                    ));
                }
            }
        }
        if let Some(q) = &self.quad {
            q.validate()?;
        }
        Ok(())
    }
}

/// One judged case of an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct CaseRow {
    pub case: usize,
    pub label: String,
    pub value: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub pass: bool,
}

impl CaseRow {
    pub fn judged(case: usize, label: impl Into<String>, value: f64, reference: f64, tol: f64) -> Self {
        let abs_error = (value - reference).abs();
        CaseRow {
            case,
            label: label.into(),
            value,
            reference,
            abs_error,
            pass: abs_error <= tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub rows: Vec<CaseRow>,
    pub passed: bool,
    pub wall_seconds: f64,
}

pub fn rows_csv(rows: &[CaseRow]) -> String {
    let mut out = String::from("case,label,value,reference,abs_error,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.case,
            r.label,
            fmt_float(r.value),
            fmt_float(r.reference),
            fmt_float(r.abs_error),
            r.pass
        ));
    }
    out
}

/// Runs one experiment and writes `<id>.json` and `<id>.csv` into `out_dir`.
///
/// `jobs` caps the worker threads; `deterministic` forces one thread, so
/// every reduction happens in a fixed order and re-runs are byte-identical.
pub fn run(
    config: &ExperimentConfig,
    out_dir: &Path,
    jobs: Option<usize>,
    deterministic: bool,
) -> Result<RunResult> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let threads = if deterministic { 1 } else { jobs.unwrap_or(0) };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let start = Instant::now();
    let rows = pool.install(|| runs::dispatch(config, out_dir))?;
    let passed = rows.iter().all(|r| r.pass);
    let result = RunResult {
        experiment: config.experiment.clone(),
        config: config.clone(),
        rows,
        passed,
        wall_seconds: start.elapsed().as_secs_f64(),
    };

    write_json(&out_dir.join(format!("{}.json", config.experiment)), &result)?;
    std::fs::write(
        out_dir.join(format!("{}.csv", config.experiment)),
        rows_csv(&result.rows),
    )?;
    Ok(result)
}
