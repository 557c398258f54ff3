//! Per-paradigm fit report: filter CSVs with JSON sidecars, bias, the sup of
//! the filter coefficients, and the continuity/convergence condition
//! verdicts against the configured test families.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use specreg_core::diagnostics::{
    bias, check_condition, penalty_is_one_lipschitz, ConditionKind, ConditionReport,
};
use specreg_core::filters::Paradigm;

use crate::config::ExperimentConfig;
use crate::CliError;

use super::{
    build_system, data_profile, family_slug, finish, parse_strategies, test_profile,
    training_model, RunSummary,
};

pub fn run_fit_report(
    cfg: &ExperimentConfig,
    dir: &Path,
    seed: u64,
) -> Result<RunSummary, CliError> {
    let strategies = parse_strategies(&cfg.paradigms)?;
    let (_, sys) = build_system(&cfg.operator, cfg.rank_tol)?;
    let pi = data_profile(cfg, &sys, seed)?;
    let level = cfg.training_level();

    let mut files = Vec::new();
    let mut entries = Vec::new();
    let mut summary = String::from("paradigm,bias,sup_g\n");

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

        let b = bias(&filter, sys.sigma(), &pi)?;
        let sup_g = filter.sup_g();
        let _ = writeln!(summary, "{},{},{}", strategy.name(), b, sup_g);

        // Baselines have no comparison-table row.
        let has_conditions = !matches!(
            strategy.paradigm(),
            Paradigm::PseudoInverse | Paradigm::TruncatedSvd { .. }
        );
        let continuity: Option<ConditionReport> = if has_conditions {
            Some(check_condition(
                &strategy.paradigm(),
                ConditionKind::Continuity,
                sys.sigma(),
                training.profile(),
                &pi,
                None,
            )?)
        } else {
            None
        };
        let convergence: Vec<ConditionReport> = if has_conditions {
            cfg.test_noise
                .iter()
                .map(|spec| {
                    let nu = test_profile(spec, level, sys.n_modes())?;
                    Ok(check_condition(
                        &strategy.paradigm(),
                        ConditionKind::Convergence,
                        sys.sigma(),
                        training.profile(),
                        &pi,
                        Some(&nu),
                    )?)
                })
                .collect::<Result<_, CliError>>()?
        } else {
            Vec::new()
        };

        entries.push(json!({
            "paradigm": strategy.name(),
            "beta": strategy.paradigm().beta(),
            "bias": b,
            "sup_g": sup_g,
            "penalty_one_lipschitz": penalty_is_one_lipschitz(filter.lambda()),
            "continuity": continuity,
            "convergence": convergence,
            "test_families": cfg.test_noise.iter().map(family_slug_of).collect::<Vec<_>>(),
        }));
    }

    let report_path = dir.join("fit_report.json");
    let mut text = serde_json::to_string_pretty(&json!({
        "experiment": cfg.experiment.name(),
        "seed": seed,
        "training_level": level,
        "paradigms": entries,
    }))
    .expect("report serializes");
    text.push('\n');
    std::fs::write(&report_path, text)?;
    files.push(report_path);

    let summary_path = dir.join("summary.csv");
    std::fs::write(&summary_path, summary)?;
    files.push(summary_path);

    finish(cfg, dir, seed, Vec::new(), files)
}

fn family_slug_of(spec: &crate::config::NoiseSpec) -> String {
    family_slug(&spec.family)
}
