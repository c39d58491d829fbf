//! `heatcast synth` — generate a seeded synthetic dataset.

use clap::Args;
use heatcast_core::synth::{generate, GeneratorConfig};

use crate::config::Context;
use crate::outdir::OutputDir;
use crate::{classify, CliError, CliResult};

#[derive(Args)]
pub struct SynthArgs {
    /// Generator configuration (TOML key=value); defaults apply when absent.
    #[arg(long = "gen-config")]
    gen_config: Option<std::path::PathBuf>,
}

pub fn run(ctx: &Context, args: SynthArgs) -> CliResult<()> {
    let mut config = match &args.gen_config {
        Some(path) => {
            let text = super::read_to_string(path)?;
            toml::from_str::<GeneratorConfig>(&text).map_err(|e| {
                CliError::Usage(format!("invalid generator config {}: {e}", path.display()))
            })?
        }
        None => GeneratorConfig::default(),
    };
    if let Some(seed) = ctx.seed.or(ctx.config.seed) {
        config.seed = seed;
    }

    let data = generate(&config).map_err(classify)?;

    let mut out = OutputDir::create(&ctx.out_dir()?, "synth")?;
    out.write("load.csv", data.load_csv.as_bytes())?;
    out.write("weather.csv", data.weather_csv.as_bytes())?;
    out.write_json("truth.json", &data.truth)?;
    out.finish()?;
    println!(
        "synth: seed {} wrote load.csv, weather.csv, truth.json ({} outliers, {} load gaps)",
        config.seed,
        data.truth.outlier_timestamps.len(),
        data.truth.load_gap_timestamps.len()
    );
    Ok(())
}
