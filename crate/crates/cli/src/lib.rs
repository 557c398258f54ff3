//! Experiment harness for spectral filter learning: configuration, the four
//! experiment runners, run manifests, and the thin command layer used by the
//! `specreg` binary.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod manifest;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{run_experiment, RunOptions, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("numerical failure: {0}")]
    Numerical(specreg_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<specreg_core::Error> for CliError {
    fn from(e: specreg_core::Error) -> Self {
        match e {
            specreg_core::Error::Io(io) => CliError::Io(io),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    /// 2 for configuration errors, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Seed precedence: command line, then config, then `SPECREG_SEED`, then 0.
pub fn resolve_seed(cli: Option<u64>, cfg: Option<u64>) -> u64 {
    cli.or(cfg)
        .or_else(|| {
            std::env::var("SPECREG_SEED")
                .ok()
                .and_then(|s| s.trim().parse().ok())
        })
        .unwrap_or(0)
}

/// Output directory precedence: command line override, then config.
pub fn resolve_output_dir(cli: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    cli.map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.output_dir.clone())
}
