//! Expected-error sweep over a decaying noise-level grid.
//!
//! For each level δ the runner refits every paradigm with the configured
//! training-noise family at level δ and evaluates the closed-form expected
//! error of one fixed ground truth against each test-noise family. The test
//! level follows each paradigm's convergence hypothesis (δ for mse, prox
//! and sc, δ² for post and adv) unless uniform scaling is requested.
//! Fitted log-log slopes of the total against the test level accompany the
//! rows; the fit skips levels whose noise term sits below 10× machine
//! epsilon.

use std::fmt::Write as _;
use std::path::Path;

use specreg_core::diagnostics::{expected_error, log_log_fit, DataTerm};

use crate::config::ExperimentConfig;
use crate::CliError;

use super::{
    build_system, data_profile, family_slug, finish, parse_strategies, test_profile,
    tests_at_squared_level, training_model, write_rows_csv, ResultRow, RunSummary,
};

/// One sweep cell together with the test level it was evaluated at (the
/// ResultRow's `delta` column records the training level).
#[derive(Debug, Clone)]
pub struct ConvergenceCell {
    pub row: ResultRow,
    pub test_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeRow {
    pub paradigm: String,
    pub family: String,
    pub slope: f64,
}

pub(crate) struct ConvergenceOutput {
    pub cells: Vec<ConvergenceCell>,
    pub slopes: Vec<SlopeRow>,
}

pub(crate) fn convergence_cells(
    cfg: &ExperimentConfig,
    seed: u64,
    uniform_scaling: bool,
) -> Result<ConvergenceOutput, CliError> {
    let strategies = parse_strategies(&cfg.paradigms)?;
    let (_, sys) = build_system(&cfg.operator, cfg.rank_tol)?;
    let pi = data_profile(cfg, &sys, seed)?;
    // Fixed ground truth in N(A)⊥: the canonical representative with
    // ⟨x, u_n⟩ = sqrt(Π_n).
    let coeffs: Vec<f64> = pi.values().iter().map(|p| p.sqrt()).collect();
    let x = sys.expand_in_u(&coeffs)?;

    let mut cells = Vec::new();
    for &delta in &cfg.delta_grid {
        for strategy in &strategies {
            let training = training_model(
                strategy.as_ref(),
                cfg.training_noise.family,
                delta,
                sys.n_modes(),
            )?;
            let filter = strategy.fit(sys.sigma(), &training, &pi)?;
            let test_level = if uniform_scaling || !tests_at_squared_level(strategy.as_ref()) {
                delta
            } else {
                delta * delta
            };
            for spec in &cfg.test_noise {
                let nu = test_profile(spec, test_level, sys.n_modes())?;
                let report = expected_error(&filter, &sys, DataTerm::FixedVector(&x), &nu)?;
                cells.push(ConvergenceCell {
                    row: ResultRow {
                        experiment: cfg.experiment.name().into(),
                        paradigm: strategy.name(),
                        delta,
                        family: family_slug(&spec.family),
                        dimension: sys.n_modes(),
                        data_term: report.data_term,
                        noise_term: report.noise_term,
                        total: report.total,
                        seed,
                    },
                    test_level,
                });
            }
        }
    }
    let slopes = fit_slopes(&cells);
    Ok(ConvergenceOutput { cells, slopes })
}

/// Log-log slope of the total error against the test noise level, one curve
/// per (paradigm, family).
fn fit_slopes(cells: &[ConvergenceCell]) -> Vec<SlopeRow> {
    let mut curves: Vec<(String, String)> = Vec::new();
    for c in cells {
        let key = (c.row.paradigm.clone(), c.row.family.clone());
        if !curves.contains(&key) {
            curves.push(key);
        }
    }
    let noise_floor = 10.0 * f64::EPSILON;
    curves
        .into_iter()
        .map(|(paradigm, family)| {
            let points: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| {
                    c.row.paradigm == paradigm
                        && c.row.family == family
                        && c.row.noise_term > noise_floor
                })
                .map(|c| (c.test_level, c.row.total))
                .collect();
            let slope = log_log_fit(&points).map(|(s, _)| s).unwrap_or(f64::NAN);
            SlopeRow {
                paradigm,
                family,
                slope,
            }
        })
        .collect()
}

pub fn run_convergence_sweep(
    cfg: &ExperimentConfig,
    dir: &Path,
    seed: u64,
    uniform_scaling: bool,
) -> Result<RunSummary, CliError> {
    let output = convergence_cells(cfg, seed, uniform_scaling)?;
    let rows: Vec<ResultRow> = output.cells.iter().map(|c| c.row.clone()).collect();

    let csv = dir.join("convergence.csv");
    write_rows_csv(&csv, &rows)?;

    let mut slope_csv = String::from("paradigm,family,slope\n");
    for s in &output.slopes {
        let _ = writeln!(slope_csv, "{},{},{}", s.paradigm, s.family, s.slope);
    }
    let slopes_path = dir.join("slopes.csv");
    std::fs::write(&slopes_path, slope_csv)?;

    finish(cfg, dir, seed, rows, vec![csv, slopes_path])
}

/// Library entry for callers that need the cells with their test levels
/// (e.g. bound checks); validates the config first.
pub fn convergence_cells_checked(
    cfg: &ExperimentConfig,
    seed: u64,
    uniform_scaling: bool,
) -> Result<(Vec<ConvergenceCell>, Vec<SlopeRow>), CliError> {
    cfg.validate()?;
    let out = convergence_cells(cfg, seed, uniform_scaling)?;
    Ok((out.cells, out.slopes))
}
