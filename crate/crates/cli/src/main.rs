//! `abflux`: run Aharonov-Bohm phase computations, frame sweeps and
//! verification suites from the command line.
//!
//! Exit status is 0 on success, 1 when a verification case or a numerical
//! computation fails, and 2 for configuration and IO errors.

mod config;
mod error;
mod frames;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use abflux_core::verify::{run_suite, Suite};
use clap::{Parser, Subcommand};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "abflux", version, about = "Aharonov-Bohm phases by the potential and flux routes")]
struct Cli {
    /// Write the report here instead of stdout (overrides the config).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Fail when the field is nonzero on a worldline.
    #[arg(long, global = true)]
    strict: bool,

    /// Record wall time per row; without it the column is zero and output is reproducible.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured frames.
    Run { config: PathBuf },
    /// Evaluate evenly spaced boosts, replacing the configured list.
    Sweep {
        config: PathBuf,
        /// Swept parameter; only the boost speed `v` (as v/c) is supported.
        #[arg(long, value_parser = ["v"], default_value = "v")]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Number of rows, endpoints included.
        #[arg(long)]
        steps: usize,
    },
    /// Run a seeded property suite: stokes, gauge, frames or appendixA.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases (default depends on the suite).
        #[arg(long)]
        count: Option<usize>,
    },
}

const SWEEP_LIMIT: f64 = 0.99;

fn load(cli: &Cli, path: &PathBuf) -> Result<(RunConfig, Option<PathBuf>, Format), CliError> {
    let mut config = RunConfig::load(path)?;
    config.strict |= cli.strict;
    let output = cli.output.clone().or_else(|| config.output.path.clone());
    let format = cli.format.unwrap_or(config.output.format);
    if let Some(p) = &output {
        report::check_writable(p)?;
    }
    Ok((config, output, format))
}

fn frames_report(cli: &Cli, path: &PathBuf, betas: Option<Vec<f64>>) -> Result<(), CliError> {
    let (config, output, format) = load(cli, path)?;
    let built = config.build()?;
    let betas = match betas {
        Some(b) => b,
        None => frames::resolve_boosts(&config)?,
    };
    let rows = frames::evaluate(&config, &built, &betas, cli.timing)?;
    let summary = frames::summarize(&rows);
    log::info!(
        "{} rows, invariance residual {:e}, route residual {:e}",
        rows.len(),
        summary.max_invariance_residual,
        summary.max_route_residual
    );
    report::emit(&report::sweep_report(&config, &rows, &summary, format)?, output.as_deref())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { config } => frames_report(cli, config, None),
        Command::Sweep { config, from, to, steps, .. } => {
            for (name, v) in [("--from", from), ("--to", to)] {
                if !(v.abs() < SWEEP_LIMIT) {
                    return Err(CliError::Config { path: name.into(), msg: format!("{v} is outside (-0.99, 0.99)") });
                }
            }
            if *steps == 0 {
                return Err(CliError::Config { path: "--steps".into(), msg: "must be at least 1".into() });
            }
            frames_report(cli, config, Some(frames::sweep_grid(*from, *to, *steps)))
        }
        Command::Verify { suite, seed, count } => {
            let suite: Suite = suite.parse().map_err(|e: abflux_core::Error| CliError::Config {
                path: "suite".into(),
                msg: e.to_string(),
            })?;
            if let Some(p) = &cli.output {
                report::check_writable(p)?;
            }
            let count = count.unwrap_or(suite.default_count());
            let cases = run_suite(suite, *seed, count);
            let format = cli.format.unwrap_or_default();
            report::emit(&report::verify_report(suite, *seed, count, &cases, format)?, cli.output.as_deref())?;
            let s = report::verify_summary(&cases);
            eprintln!("{suite}: {}/{} passed, max residual {:e}", s.passed, s.total, s.max_residual);
            if s.failed > 0 {
                return Err(CliError::Verification { failed: s.failed, total: s.total });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abflux: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
