use std::fmt::Write as _;

use clap::ValueEnum;
use reducible_car::engine::Exec;
use serde::Serialize;

use crate::config::RunConfig;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    pub check: String,
    /// Parameter point of the check, e.g. `N=4`; empty when there is only one.
    pub case: String,
    pub identity: String,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    /// Measured quantity the residual was derived from, when they differ.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub parallel: bool,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            parallel: Exec::Parallel.is_parallel(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub pass: bool,
    pub seed: u64,
    pub config: RunConfig,
    pub environment: Environment,
    pub summary: Summary,
    pub warnings: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(config: RunConfig, records: Vec<Record>, warnings: Vec<String>) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        Self {
            pass: passed == records.len(),
            seed: config.seed,
            config,
            environment: Environment::current(),
            summary: Summary {
                total: records.len(),
                passed,
                failed: records.len() - passed,
            },
            warnings,
            records,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Pretty JSON with object keys in sorted order and records in execution order.
pub fn to_json(report: &Report) -> String {
    // serde_json's Value map is a BTreeMap, which sorts the keys.
    let value = serde_json::to_value(report).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

fn fmt_residual(r: &Record) -> String {
    match r.residual {
        Some(v) => format!("{v:.3e}"),
        None => "-".into(),
    }
}

pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let rows: Vec<[String; 6]> = report
        .records
        .iter()
        .map(|r| {
            [
                r.suite.clone(),
                r.check.clone(),
                r.case.clone(),
                fmt_residual(r),
                format!("{:.1e}", r.tolerance),
                if r.pass { "PASS".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    let header = ["suite", "check", "case", "residual", "tolerance", "status"].map(String::from);
    let mut widths = header.clone().map(|h| h.len());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    for r in report.records.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(out, "error in {} {}: {}", r.check, r.case, r.error.as_deref().unwrap_or(""));
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(
        out,
        "seed {}: {} of {} checks passed, overall {}",
        report.seed,
        report.summary.passed,
        report.summary.total,
        if report.pass { "PASS" } else { "FAIL" }
    );
    out
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report),
    }
}
