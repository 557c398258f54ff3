//! The experiment runners behind `specreg experiment <name>` plus the
//! svd/fit/reconstruct one-shot commands.
//!
//! Every run is a pure function of (config, seed): sampling goes through
//! per-cell derived seeds and rows are written in a fixed order, so reruns
//! are byte-identical.

mod continuity;
mod convergence;
mod fit_report;
mod recon_grid;

pub use continuity::{continuity_response, run_continuity_sweep};
pub use convergence::{
    convergence_cells_checked, run_convergence_sweep, ConvergenceCell, SlopeRow,
};
pub use fit_report::run_fit_report;
pub use recon_grid::{recon_cell_error, run_recon_grid};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use specreg_core::filters::{FilterStrategy, StrategyRegistry};
use specreg_core::matrix::DenseMatrix;
use specreg_core::operators::{build_operator, sample_data_corpus, OperatorSpec};
use specreg_core::rng::mix_seed;
use specreg_core::stochastics::{
    estimate_profile, training_noise_rule, NoiseModel, NoiseSide, SpectrumProfile,
    TrainingNoiseFamily,
};
use specreg_core::svd::compute_svd;
use specreg_core::system::SingularSystem;

use crate::config::{ExperimentConfig, ExperimentKind, NoiseSpec};
use crate::manifest::RunManifest;
use crate::CliError;

/// One output record of a sweep. CSV columns mirror these fields exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub paradigm: String,
    pub delta: f64,
    pub family: String,
    pub dimension: usize,
    pub data_term: f64,
    pub noise_term: f64,
    pub total: f64,
    pub seed: u64,
}

pub const RESULT_HEADER: &str =
    "experiment,paradigm,delta,family,dimension,data_term,noise_term,total,seed";

pub fn write_rows_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut out = String::from(RESULT_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.paradigm,
            r.delta,
            r.family,
            r.dimension,
            r.data_term,
            r.noise_term,
            r.total,
            r.seed
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Options resolved from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    /// Test every paradigm at the same noise level δ instead of the
    /// per-paradigm convergence scaling (post/adv tested at δ²).
    pub uniform_scaling: bool,
}

#[derive(Debug)]
pub struct RunSummary {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub rows: Vec<ResultRow>,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Validate the config and dispatch to the matching runner.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let seed = crate::resolve_seed(opts.seed, cfg.seed);
    let dir = crate::resolve_output_dir(opts.output_dir.as_deref(), cfg);
    std::fs::create_dir_all(&dir)?;
    match cfg.experiment {
        ExperimentKind::ContinuitySweep => run_continuity_sweep(cfg, &dir, seed),
        ExperimentKind::ConvergenceSweep => {
            run_convergence_sweep(cfg, &dir, seed, opts.uniform_scaling)
        }
        ExperimentKind::ReconGrid => run_recon_grid(cfg, &dir, seed),
        ExperimentKind::FitReport => run_fit_report(cfg, &dir, seed),
    }
}

pub(crate) fn finish(
    cfg: &ExperimentConfig,
    dir: &Path,
    seed: u64,
    rows: Vec<ResultRow>,
    files: Vec<PathBuf>,
) -> Result<RunSummary, CliError> {
    let manifest = RunManifest::write(dir, cfg.experiment.name(), seed, cfg, &files)?;
    Ok(RunSummary {
        experiment: cfg.experiment,
        seed,
        output_dir: dir.to_path_buf(),
        rows,
        files,
        manifest,
    })
}

pub(crate) fn parse_strategies(names: &[String]) -> Result<Vec<Box<dyn FilterStrategy>>, CliError> {
    let registry = StrategyRegistry::builtin();
    names
        .iter()
        .map(|n| registry.parse(n).map_err(CliError::from))
        .collect()
}

/// Build the operator named by the config and decompose it.
pub(crate) fn build_system(
    spec: &OperatorSpec,
    rank_tol: f64,
) -> Result<(DenseMatrix, SingularSystem), CliError> {
    let matrix = build_operator(spec)?;
    let sys = compute_svd(&matrix, rank_tol)?;
    Ok((matrix, sys))
}

/// Per-mode data variances for the configured data model.
///
/// Analytic: Π_n = n^(-q). Corpus file: estimated from its rows. Tomography
/// without an explicit model: estimated from `corpus_count` generated
/// phantoms on a derived seed.
pub(crate) fn data_profile(
    cfg: &ExperimentConfig,
    sys: &SingularSystem,
    seed: u64,
) -> Result<SpectrumProfile, CliError> {
    if let Some(q) = cfg.data.analytic_q {
        return Ok(SpectrumProfile::power_law(1.0, q, sys.n_modes())?);
    }
    if let Some(path) = &cfg.data.corpus_path {
        let matrix = DenseMatrix::load_csv(path)?;
        let samples: Vec<Vec<f64>> = (0..matrix.rows()).map(|r| matrix.row(r).to_vec()).collect();
        return Ok(estimate_profile(&samples, sys, NoiseSide::XSide)?);
    }
    // Tomography: estimate from generated phantoms.
    let corpus = sample_data_corpus(
        &cfg.operator,
        sys,
        2.0,
        cfg.corpus_count,
        mix_seed(seed, 0xDA7A),
    )?;
    Ok(estimate_profile(&corpus, sys, NoiseSide::XSide)?)
}

/// Training model for one paradigm at one level, on the side the paradigm
/// trains in.
pub(crate) fn training_model(
    strategy: &dyn FilterStrategy,
    family: TrainingNoiseFamily,
    level: f64,
    n_modes: usize,
) -> Result<NoiseModel, CliError> {
    Ok(training_noise_rule(
        level,
        family,
        n_modes,
        strategy.training_side(),
    )?)
}

/// Per-mode variances of a test-noise family at the given level.
pub(crate) fn test_profile(
    spec: &NoiseSpec,
    level: f64,
    n_modes: usize,
) -> Result<SpectrumProfile, CliError> {
    Ok(match spec.family {
        TrainingNoiseFamily::White => SpectrumProfile::white(level, n_modes)?,
        TrainingNoiseFamily::PowerLaw { exponent } => {
            SpectrumProfile::power_law(level, exponent, n_modes)?
        }
    })
}

pub(crate) fn family_slug(family: &TrainingNoiseFamily) -> String {
    match family {
        TrainingNoiseFamily::White => "white".into(),
        TrainingNoiseFamily::PowerLaw { exponent } => format!("power_law_{exponent}"),
    }
}

/// Paradigms whose convergence analysis tests at δ²: post-processing and the
/// gradient-penalty adversarial fit.
pub(crate) fn tests_at_squared_level(strategy: &dyn FilterStrategy) -> bool {
    use specreg_core::filters::Paradigm;
    matches!(strategy.paradigm(), Paradigm::Post | Paradigm::Adv { .. })
}
