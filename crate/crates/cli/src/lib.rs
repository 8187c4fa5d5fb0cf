//! Library side of the `qndsim` command: config schema, scenario pipelines and
//! artifact writing.

pub mod config;
pub mod output;
pub mod scenarios;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{config_hash, ExperimentConfig, Scenario, SCHEMA_VERSION};
pub use output::{write_run, Manifest};
pub use scenarios::{diagnose, run_scenario, Diagnostic};

pub const DEFAULT_OUTPUT_DIR: &str = "qndsim-out";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("physics error: {0}")]
    Physics(String),
    #[error("out-of-regime configuration:\n{}", format_diagnostics(.0))]
    Regime(Vec<Diagnostic>),
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) => 2,
            CliError::Physics(_) | CliError::Regime(_) => 3,
        }
    }
}

pub fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {}: {}", d.path, d.message))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn diagnose_config(config: &ExperimentConfig) -> Vec<Diagnostic> {
    config
        .scenarios
        .iter()
        .enumerate()
        .flat_map(|(i, s)| diagnose(s, i))
        .collect()
}

/// Load, check and diagnose a config without running it.
pub fn validate(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let config = config::load(path, overrides)?;
    let diags = diagnose_config(&config);
    if diags.is_empty() {
        Ok(config)
    } else {
        Err(CliError::Regime(diags))
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub overrides: Vec<String>,
}

pub fn run(path: &Path, options: &RunOptions) -> Result<(PathBuf, Manifest), CliError> {
    let mut config = validate(path, &options.overrides)?;
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    let out = options
        .output_dir
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let manifest = run_config(&config, &out)?;
    Ok((out, manifest))
}

pub fn run_config(config: &ExperimentConfig, out: &Path) -> Result<Manifest, CliError> {
    let hash = config_hash(config);
    let outputs = config
        .scenarios
        .iter()
        .enumerate()
        .map(|(i, s)| run_scenario(s, i, config.seed, &hash))
        .collect::<Result<Vec<_>, _>>()?;
    write_run(out, config, &hash, &outputs)
}
