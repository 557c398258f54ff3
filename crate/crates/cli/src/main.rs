use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specreg_cli::config::{ExperimentConfig, ExperimentKind};
use specreg_cli::experiments::{run_experiment, RunOptions};
use specreg_cli::{commands, resolve_output_dir, resolve_seed, CliError};

/// Spectral filter learning for linear ill-posed inverse problems.
#[derive(Parser)]
#[command(name = "specreg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long, value_name = "path.json")]
    config: PathBuf,
    /// Seed override (falls back to the config, then SPECREG_SEED, then 0).
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the configured operator and write the singular system.
    Svd {
        #[command(flatten)]
        common: Common,
    },
    /// Fit the configured paradigms and export the filters.
    Fit {
        #[command(flatten)]
        common: Common,
    },
    /// Reconstruct a measurement with the first configured paradigm.
    Reconstruct {
        #[command(flatten)]
        common: Common,
    },
    /// Run a named experiment: continuity_sweep, convergence_sweep,
    /// recon_grid or fit_report.
    Experiment {
        /// Experiment name; must match the config's `experiment` field.
        name: String,
        #[command(flatten)]
        common: Common,
        /// Test every paradigm at noise level δ instead of the
        /// per-paradigm convergence scaling (post/adv at δ²).
        #[arg(long)]
        uniform_scaling: bool,
    },
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Svd { common } => {
            let cfg = ExperimentConfig::load(&common.config)?;
            let seed = resolve_seed(common.seed, cfg.seed);
            let dir = resolve_output_dir(common.out.as_deref(), &cfg);
            let files = commands::cmd_svd(&cfg, &dir, seed)?;
            println!("wrote {} artifacts to {}", files.len(), dir.display());
            Ok(())
        }
        Command::Fit { common } => {
            let cfg = ExperimentConfig::load(&common.config)?;
            let seed = resolve_seed(common.seed, cfg.seed);
            let dir = resolve_output_dir(common.out.as_deref(), &cfg);
            let files = commands::cmd_fit(&cfg, &dir, seed)?;
            println!("wrote {} artifacts to {}", files.len(), dir.display());
            Ok(())
        }
        Command::Reconstruct { common } => {
            let cfg = ExperimentConfig::load(&common.config)?;
            let seed = resolve_seed(common.seed, cfg.seed);
            let dir = resolve_output_dir(common.out.as_deref(), &cfg);
            let files = commands::cmd_reconstruct(&cfg, &dir, seed)?;
            println!("wrote {} artifacts to {}", files.len(), dir.display());
            Ok(())
        }
        Command::Experiment {
            name,
            common,
            uniform_scaling,
        } => {
            let kind = ExperimentKind::parse(&name).ok_or_else(|| {
                CliError::Config(vec![format!(
                    "experiment: unknown name {name:?} \
                     (continuity_sweep|convergence_sweep|recon_grid|fit_report)"
                )])
            })?;
            let cfg = ExperimentConfig::load(&common.config)?;
            if cfg.experiment != kind {
                return Err(CliError::Config(vec![format!(
                    "experiment: config declares {:?} but the command asked for {name:?}",
                    cfg.experiment.name()
                )]));
            }
            let opts = RunOptions {
                seed: common.seed,
                output_dir: common.out,
                uniform_scaling,
            };
            let summary = run_experiment(&cfg, &opts)?;
            println!(
                "{}: seed {}, {} rows, {} artifacts in {}",
                summary.experiment.name(),
                summary.seed,
                summary.rows.len(),
                summary.files.len(),
                summary.output_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specreg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
