//! Pipeline configuration file: optional defaults for any subcommand,
//! overridden by command-line flags.

use std::path::{Path, PathBuf};

use heatcast_core::selection::SelectionConfig;
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Default output directory.
    pub out: Option<PathBuf>,
    /// Default seed for synthetic generation.
    pub seed: Option<u64>,
    /// Default scenario level for fitting (`load_only`, `plus_temperature`,
    /// `plus_irradiation`, `plus_calendar`).
    pub scenario: Option<String>,
    /// Restrict fitting to these segments (e.g. `winter_workday`).
    pub segments: Option<Vec<String>>,
    /// Default forecast horizon in hours.
    pub horizon: Option<usize>,
    /// Default evaluation mode (`one-step` or `recursive`).
    pub evaluation_mode: Option<String>,
    /// Selection overrides.
    #[serde(default)]
    pub selection: SelectionOverrides,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionOverrides {
    pub p_entry: Option<f64>,
    pub variance_threshold: Option<f64>,
    pub max_dummies: Option<usize>,
    pub na_max: Option<u32>,
    pub nb_max: Option<u32>,
    pub nc_max: Option<u32>,
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(PipelineConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Data(anyhow::anyhow!("cannot read config {}: {e}", path.display()))
        })?;
        toml::from_str(&text).map_err(|e| {
            CliError::Usage(format!("invalid config {}: {e}", path.display()))
        })
    }

    /// Selection config with file overrides applied.
    pub fn selection_config(&self) -> SelectionConfig {
        let mut config = SelectionConfig::default();
        let o = &self.selection;
        if let Some(v) = o.p_entry {
            config.p_entry = v;
        }
        if let Some(v) = o.variance_threshold {
            config.variance_threshold = v;
        }
        if let Some(v) = o.max_dummies {
            config.max_dummies = v;
        }
        if let Some(v) = o.na_max {
            config.na_max = v;
        }
        if let Some(v) = o.nb_max {
            config.nb_max = v;
        }
        if let Some(v) = o.nc_max {
            config.nc_max = v;
        }
        config
    }
}

/// Global invocation context: config file plus global flags.
pub struct Context {
    pub config: PipelineConfig,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Context {
    /// The output directory: flag, then config, else an error.
    pub fn out_dir(&self) -> CliResult<PathBuf> {
        self.out
            .clone()
            .or_else(|| self.config.out.clone())
            .ok_or_else(|| CliError::Usage("no output directory: pass --out".into()))
    }
}
