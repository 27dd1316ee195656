//! CSV and JSON writers. Floats go out as `{:.16e}` in CSV (17 significant
//! digits) and as shortest round-trip decimals in JSON, so the same input
//! always yields the same bytes.

use std::io::Write;
use std::path::Path;

use abflux_core::verify::{CaseResult, Suite};
use serde::Serialize;

use crate::config::{Format, RunConfig, SCHEMA_VERSION};
use crate::error::CliError;
use crate::frames::{SweepRow, Summary, COLUMNS};

#[derive(Serialize)]
struct Versions {
    abflux: &'static str,
    schema_version: u32,
}

const VERSIONS: Versions = Versions { abflux: env!("CARGO_PKG_VERSION"), schema_version: SCHEMA_VERSION };

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

fn csv_bytes<F>(header: &[&str], fill: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    fill(&mut w).map_err(io)?;
    w.into_inner().map_err(io)
}

fn json_bytes(value: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(io)?;
    out.push(b'\n');
    Ok(out)
}

pub fn sweep_report(config: &RunConfig, rows: &[SweepRow], summary: &Summary, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => csv_bytes(&COLUMNS, |w| {
            for r in rows {
                w.write_record([
                    sci(r.v_over_c),
                    sci(r.gamma),
                    sci(r.phase_magnetic),
                    sci(r.phase_electric),
                    sci(r.phase_total),
                    sci(r.analytic_total),
                    sci(r.abs_err),
                    r.panels_used.to_string(),
                    sci(r.wall_time_ms),
                    sci(r.phase_total_mod_2pi),
                    sci(r.phase_potential),
                ])?;
            }
            Ok(())
        }),
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                config: &'a RunConfig,
                rows: &'a [SweepRow],
                summary: &'a Summary,
                versions: Versions,
            }
            json_bytes(&Report { config, rows, summary, versions: VERSIONS })
        }
    }
}

#[derive(Serialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
}

pub fn verify_summary(cases: &[CaseResult]) -> VerifySummary {
    let passed = cases.iter().filter(|c| c.passed).count();
    VerifySummary {
        total: cases.len(),
        passed,
        failed: cases.len() - passed,
        max_residual: cases.iter().map(|c| c.residual).fold(0.0, f64::max),
    }
}

pub fn verify_report(suite: Suite, seed: u64, count: usize, cases: &[CaseResult], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => csv_bytes(&["suite", "case", "seed", "lhs", "rhs", "residual", "tolerance", "passed", "error"], |w| {
            for c in cases {
                w.write_record([
                    c.suite.to_string(),
                    c.case.clone(),
                    c.seed.map(|s| s.to_string()).unwrap_or_default(),
                    sci(c.lhs),
                    sci(c.rhs),
                    sci(c.residual),
                    sci(c.tolerance),
                    c.passed.to_string(),
                    c.error.clone().unwrap_or_default(),
                ])?;
            }
            Ok(())
        }),
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                suite: Suite,
                seed: u64,
                count: usize,
                cases: &'a [CaseResult],
                summary: VerifySummary,
                versions: Versions,
            }
            json_bytes(&Report { suite, seed, count, cases, summary: verify_summary(cases), versions: VERSIONS })
        }
    }
}

/// Fails early, before any computation, if `path` cannot be written.
pub fn check_writable(path: &Path) -> Result<(), CliError> {
    std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map(drop)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io)
        }
    }
}
