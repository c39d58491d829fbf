//! `heatcast clean` — ingest, align, flag outliers and impute short gaps.

use clap::Args;
use heatcast_core::{ingest, preprocess};

use crate::config::Context;
use crate::outdir::OutputDir;
use crate::{classify, CliResult};

#[derive(Args)]
pub struct CleanArgs {
    /// Hourly load CSV (`timestamp,load_kwh`).
    #[arg(long)]
    load: std::path::PathBuf,
    /// Quarter-hourly weather CSV (`timestamp,temp_c,irr_wm2`).
    #[arg(long)]
    weather: std::path::PathBuf,
}

pub fn run(ctx: &Context, args: CleanArgs) -> CliResult<()> {
    let loads = ingest::parse_load_csv(super::open(&args.load)?).map_err(classify)?;
    let weather = ingest::parse_weather_csv(super::open(&args.weather)?).map_err(classify)?;
    let hourly = ingest::resample_weather(&weather);
    let mut obs = ingest::align(&loads, &hourly);

    let report = preprocess::detect_outliers_iqr(&mut obs);
    preprocess::impute(&mut obs);

    let mut cleaned = Vec::new();
    ingest::write_cleaned_csv(&obs, &mut cleaned).map_err(classify)?;

    let mut out = OutputDir::create(&ctx.out_dir()?, "clean")?;
    out.write("cleaned.csv", &cleaned)?;
    out.write_json("outlier_report.json", &report)?;
    out.finish()?;
    println!(
        "clean: {} rows, {} loads flagged as outliers ({:.2}% of load rows)",
        obs.len(),
        report.flagged_rows.len(),
        100.0 * report.flagged_fraction
    );
    Ok(())
}
