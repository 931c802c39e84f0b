//! Scenario runner behind the `floquet` binary: sweeps over the physics
//! modules, figure-ready CSV, JSON reports and the verification suite.

mod config;
mod scenarios;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

pub use config::{Quantity, Scenario, ScenarioConfig, Sweep};
pub use verify::{format_table, verify_all, VerifyOptions};

use crate::{Error, Result};

pub const TOOL_VERSION: &str = concat!("floquet ", env!("CARGO_PKG_VERSION"));

/// Result of one embedded invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when `worst_residual ≤ tol`.
    pub fn bound(name: impl Into<String>, worst_residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: worst_residual <= tol,
            worst_residual,
            tol,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

/// Tabular output; the first `n_inputs` columns of each row are the inputs it
/// was computed from.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub n_inputs: usize,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: &'static str,
    pub config: ScenarioConfig,
    pub table: Table,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub warnings: Vec<String>,
    /// Scenario-specific summaries (fits, detected periods, ...).
    pub extra: serde_json::Value,
    pub wall_clock_s: f64,
}

/// Options shared by `run` and `verify`.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Replaces every check tolerance when set.
    pub tol: Option<f64>,
    /// Replaces the config's seed list when set.
    pub seeds: Option<Vec<u64>>,
}

pub(crate) struct ScenarioOutput {
    pub table: Table,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub extra: serde_json::Value,
}

/// Runs a scenario and writes `<output>.csv` and `<output>.json` into the
/// output directory.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunReport> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    if let Some(seeds) = &opts.seeds {
        cfg.seeds = seeds.clone();
    }
    let out = scenarios::run(&cfg, opts.tol)?;
    let report = RunReport {
        tool_version: TOOL_VERSION,
        passed: out.checks.iter().all(|c| c.passed),
        config: cfg,
        table: out.table,
        checks: out.checks,
        warnings: out.warnings,
        extra: out.extra,
        wall_clock_s: start.elapsed().as_secs_f64(),
    };
    let base = report
        .config
        .output
        .clone()
        .unwrap_or_else(|| report.config.scenario.name().to_string());
    std::fs::create_dir_all(&opts.out_dir)?;
    write_csv(
        std::fs::File::create(opts.out_dir.join(format!("{base}.csv")))?,
        &report,
    )?;
    let json = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
    std::fs::write(opts.out_dir.join(format!("{base}.json")), json + "\n")?;
    Ok(report)
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// `#` metadata lines, a header row of `name [unit]`, then the data.
/// Only the first line carries the tool version; everything else depends on
/// the config alone.
pub fn write_csv<W: Write>(w: W, report: &RunReport) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(w);
    let cfg = &report.config;
    writeln!(w, "# {}", report.tool_version)?;
    writeln!(w, "# scenario: {}", cfg.scenario.name())?;
    for (k, q) in &cfg.params {
        writeln!(w, "# {k} = {} [{}]", format_number(q.value), q.unit)?;
    }
    for (k, s) in &cfg.sweep {
        let pts = s.points().unwrap_or_default();
        writeln!(w, "# sweep {k}: {} points [{}]", pts.len(), s.unit)?;
    }
    if !cfg.seeds.is_empty() {
        let seeds: Vec<String> = cfg.seeds.iter().map(u64::to_string).collect();
        writeln!(w, "# seeds: {}", seeds.join(" "))?;
    }
    let header: Vec<String> = report
        .table
        .columns
        .iter()
        .map(|c| format!("{} [{}]", c.name, c.unit))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for row in &report.table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    ScenarioConfig::parse(&text)
}

/// Process exit code for an error: 2 for configuration and parameter
/// problems, 3 for capacity limits, 1 for failed numerical invariants.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Capacity { .. } => 3,
        Error::Config { .. } | Error::Domain(_) | Error::Precondition(_) | Error::Io(_) => 2,
        Error::Numerical(_) | Error::Mismatch(_) => 1,
    }
}
