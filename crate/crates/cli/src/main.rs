//! `heatcast` — the end-to-end heat-load pipeline: synthesize or ingest
//! hourly data, clean it, fit the four segment models, forecast and report.

mod commands;
mod config;
mod outdir;
mod svg;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::config::PipelineConfig;

/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
    Numerical(anyhow::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Data(e) | CliError::Numerical(e) => format!("{e:#}"),
        }
    }
}

/// Classifies a core error: fitting/forecast infeasibilities are numerical
/// failures, everything else is a data problem.
pub fn classify(err: heatcast_core::Error) -> CliError {
    use heatcast_core::Error as E;
    match err {
        E::EmptySegment { .. }
        | E::InsufficientData { .. }
        | E::SegmentMismatch { .. }
        | E::MissingExogenous { .. }
        | E::HistoryGap(_) => CliError::Numerical(err.into()),
        _ => CliError::Data(err.into()),
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "heatcast",
    version,
    about = "Hourly heat-load modeling and forecasting for district-heating buildings"
)]
struct Cli {
    /// Pipeline configuration file (TOML); command-line flags override it.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Seed for synthetic-data generation.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset (load CSV, weather CSV, truth JSON).
    Synth(commands::synth::SynthArgs),
    /// Clean raw meter and weather CSVs into the hourly series.
    Clean(commands::clean::CleanArgs),
    /// Fit per-segment models with lag search and forward selection.
    Fit(commands::fit::FitArgs),
    /// Recursive multi-step forecast from a fitted model.
    Forecast(commands::forecast::ForecastArgs),
    /// Score fitted models on held-out data.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Render figure-shaped CSVs and static SVG charts from an evaluation.
    Report(commands::report::ReportArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };

    let config = match PipelineConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    };
    let ctx = config::Context {
        config,
        out: cli.out,
        seed: cli.seed,
    };

    let result = match cli.command {
        Command::Synth(args) => commands::synth::run(&ctx, args),
        Command::Clean(args) => commands::clean::run(&ctx, args),
        Command::Fit(args) => commands::fit::run(&ctx, args),
        Command::Forecast(args) => commands::forecast::run(&ctx, args),
        Command::Evaluate(args) => commands::evaluate::run(&ctx, args),
        Command::Report(args) => commands::report::run(&ctx, args),
    };

    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}
