//! Perturbation-response sweep over input dimensions.
//!
//! For each dimension N the runner builds the diagonal operator, fits every
//! configured paradigm with training noise at the configured level, applies
//! the fitted reconstruction to the fixed perturbation ε = c·v_N along the
//! last singular vector, and records ‖R(ε)‖².

use std::path::Path;

use specreg_core::filters::{reconstruct, FilterStrategy};
use specreg_core::operators::OperatorSpec;
use specreg_core::stochastics::{SpectrumProfile, TrainingNoiseFamily};
use specreg_core::system::SingularSystem;

use crate::config::ExperimentConfig;
use crate::CliError;

use super::{
    build_system, finish, parse_strategies, training_model, write_rows_csv, ResultRow, RunSummary,
};

/// ‖R(ε)‖ for the perturbation ε = `perturbation`·v_N, with the filter
/// fitted from `training_family` noise at `training_level` on the side the
/// paradigm expects.
pub fn continuity_response(
    sys: &SingularSystem,
    strategy: &dyn FilterStrategy,
    pi: &SpectrumProfile,
    training_family: TrainingNoiseFamily,
    training_level: f64,
    perturbation: f64,
) -> Result<f64, CliError> {
    let training = training_model(strategy, training_family, training_level, sys.n_modes())?;
    let filter = strategy.fit(sys.sigma(), &training, pi)?;
    let last = sys.n_modes() - 1;
    let epsilon: Vec<f64> = (0..sys.dim_y())
        .map(|r| perturbation * sys.v().at(r, last))
        .collect();
    let response = reconstruct(&epsilon, &filter, sys)?;
    Ok(response.iter().map(|v| v * v).sum::<f64>().sqrt())
}

pub fn run_continuity_sweep(
    cfg: &ExperimentConfig,
    dir: &Path,
    seed: u64,
) -> Result<RunSummary, CliError> {
    let strategies = parse_strategies(&cfg.paradigms)?;
    let level = cfg.training_level();
    let decay = match cfg.operator {
        OperatorSpec::Diagonal { decay, .. } => decay,
        _ => unreachable!("validated: continuity sweep runs on diagonal operators"),
    };
    let q = cfg.data.analytic_q.unwrap_or(2.0);

    let mut rows = Vec::new();
    for n in cfg.continuity_dimensions() {
        let (_, sys) = build_system(&OperatorSpec::Diagonal { decay, size: n }, cfg.rank_tol)?;
        let pi = SpectrumProfile::power_law(1.0, q, sys.n_modes())?;
        for strategy in &strategies {
            let norm = continuity_response(
                &sys,
                strategy.as_ref(),
                &pi,
                cfg.training_noise.family,
                level,
                cfg.perturbation,
            )?;
            rows.push(ResultRow {
                experiment: cfg.experiment.name().into(),
                paradigm: strategy.name(),
                delta: level,
                family: "perturbation".into(),
                dimension: n,
                data_term: 0.0,
                noise_term: norm * norm,
                total: norm * norm,
                seed,
            });
        }
    }

    let csv = dir.join("continuity.csv");
    write_rows_csv(&csv, &rows)?;
    finish(cfg, dir, seed, rows, vec![csv])
}
