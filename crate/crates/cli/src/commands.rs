//! One-shot commands: decompose an operator, fit filters, reconstruct a
//! measurement. Each writes its artifacts plus a manifest into the output
//! directory.

use std::path::{Path, PathBuf};

use specreg_core::matrix::DenseMatrix;
use specreg_core::operators::build_operator;
use specreg_core::svd::compute_svd;
use specreg_core::system::SingularSystem;

use crate::config::ExperimentConfig;
use crate::experiments::{data_profile, parse_strategies, training_model};
use crate::manifest::RunManifest;
use crate::CliError;

fn load_or_build_matrix(cfg: &ExperimentConfig) -> Result<DenseMatrix, CliError> {
    match &cfg.matrix_csv {
        Some(path) => Ok(DenseMatrix::load_csv(path)?),
        None => {
            cfg.operator
                .validate()
                .map_err(|e| CliError::Config(vec![format!("operator: {e}")]))?;
            Ok(build_operator(&cfg.operator)?)
        }
    }
}

fn decompose(cfg: &ExperimentConfig) -> Result<(DenseMatrix, SingularSystem), CliError> {
    let matrix = load_or_build_matrix(cfg)?;
    let sys = compute_svd(&matrix, cfg.rank_tol)?;
    Ok((matrix, sys))
}

/// `specreg svd`: write the operator matrix, the singular system and its
/// spectrum.
pub fn cmd_svd(cfg: &ExperimentConfig, dir: &Path, seed: u64) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let (matrix, sys) = decompose(cfg)?;
    let matrix_path = dir.join("operator.csv");
    matrix.save_csv(&matrix_path)?;
    let sys_path = dir.join("system.svdsys");
    sys.save(&sys_path)?;
    let mut csv = String::from("n,sigma\n");
    for (n, s) in sys.sigma().iter().enumerate() {
        csv.push_str(&format!("{},{s}\n", n + 1));
    }
    let csv_path = dir.join("sigma.csv");
    std::fs::write(&csv_path, csv)?;
    let files = vec![matrix_path, sys_path, csv_path];
    RunManifest::write(dir, "svd", seed, cfg, &files)?;
    Ok(files)
}

/// `specreg fit`: fit every configured paradigm at the training level and
/// export the filters.
pub fn cmd_fit(cfg: &ExperimentConfig, dir: &Path, seed: u64) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let strategies = parse_strategies(&cfg.paradigms)?;
    let (_, sys) = decompose(cfg)?;
    let pi = data_profile(cfg, &sys, seed)?;
    let level = cfg.training_level();
    let mut files = Vec::new();
    for strategy in &strategies {
        let training = training_model(
            strategy.as_ref(),
            cfg.training_noise.family,
            level,
            sys.n_modes(),
        )?;
        let filter = strategy.fit(sys.sigma(), &training, &pi)?;
        let csv_path = dir.join(format!("{}.csv", strategy.paradigm().slug()));
        filter.save_csv_with_sidecar(sys.sigma(), &csv_path)?;
        files.push(csv_path.clone());
        files.push(csv_path.with_extension("json"));
    }
    RunManifest::write(dir, "fit", seed, cfg, &files)?;
    Ok(files)
}

/// `specreg reconstruct`: fit the first configured paradigm and apply it to
/// the measurement read from `measurement_csv`.
pub fn cmd_reconstruct(
    cfg: &ExperimentConfig,
    dir: &Path,
    seed: u64,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let measurement_path = cfg.measurement_csv.as_ref().ok_or_else(|| {
        CliError::Config(vec![
            "measurement_csv: required by the reconstruct command".into()
        ])
    })?;
    let strategies = parse_strategies(&cfg.paradigms)?;
    let strategy = strategies.first().ok_or_else(|| {
        CliError::Config(vec!["paradigms: must name at least one paradigm".into()])
    })?;
    let (_, sys) = decompose(cfg)?;

    let m = DenseMatrix::load_csv(measurement_path)?;
    let y: Vec<f64> = if m.cols() == 1 || m.rows() == 1 {
        m.entries().to_vec()
    } else {
        return Err(CliError::Config(vec![format!(
            "measurement_csv: expected a vector, got {}x{}",
            m.rows(),
            m.cols()
        )]));
    };

    let pi = data_profile(cfg, &sys, seed)?;
    let training = training_model(
        strategy.as_ref(),
        cfg.training_noise.family,
        cfg.training_level(),
        sys.n_modes(),
    )?;
    let filter = strategy.fit(sys.sigma(), &training, &pi)?;
    let x = specreg_core::filters::reconstruct(&y, &filter, &sys)?;

    let out = DenseMatrix::new(x.len(), 1, x)?;
    let rec_path = dir.join("reconstruction.csv");
    out.save_csv(&rec_path)?;
    let files = vec![rec_path];
    RunManifest::write(dir, "reconstruct", seed, cfg, &files)?;
    Ok(files)
}
