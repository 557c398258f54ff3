//! End-to-end acceptance suite. One test per criterion; each prints a
//! single PASS/FAIL line (run with `--nocapture` to see the PASS lines).

#![allow(clippy::needless_range_loop)]

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;

use specreg_cli::config::ExperimentConfig;
use specreg_cli::experiments::{
    continuity_response, convergence_cells_checked, run_experiment, RunOptions,
};
use specreg_core::diagnostics::{
    bias, check_condition, erm_oracle, expected_error, scalar_objective_oracle, ConditionKind,
    DataTerm, ScalarObjective,
};
use specreg_core::filters::{
    denoise, fit_adv, fit_denoiser, fit_mse, fit_post, fit_prox, fit_sc, parse_paradigm,
    pseudo_inverse_filter, reconstruct, truncated_svd_filter, Paradigm,
};
use specreg_core::operators::{build_operator, OperatorSpec};
use specreg_core::rng::{mix_seed, rng_for};
use specreg_core::stochastics::{
    sample_noise, NoiseModel, NoiseSide, SpectrumProfile, TrainingNoiseFamily,
};
use specreg_core::svd::compute_svd;
use specreg_core::system::{apply_forward, SingularSystem};
use specreg_core::DenseMatrix;

fn verdict(id: &str, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{id} {name}: {detail}");
}

fn diagonal_system(n: usize) -> SingularSystem {
    compute_svd(
        &build_operator(&OperatorSpec::Diagonal {
            decay: 1.0,
            size: n,
        })
        .unwrap(),
        0.0,
    )
    .unwrap()
}

/// Reference 32-mode setup: σ_n = n^(-1), Π_n = n^(-2).
fn reference_system() -> (SingularSystem, SpectrumProfile) {
    let sys = diagonal_system(32);
    let pi = SpectrumProfile::power_law(1.0, 2.0, 32).unwrap();
    (sys, pi)
}

#[test]
fn c01_adv_closed_form_agrees_with_golden_section() {
    let start = Instant::now();
    let mut rng = rng_for(101, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sigma = rng.random_range(1e-3..=1.0);
        let pi = rng.random_range(1e-4..=1.0);
        let delta = rng.random_range(0.0..=1.0);
        let beta = rng.random_range(0.05..=2.0);
        let closed = (3.0 / (8.0 * beta)) * delta / (3.0 * sigma * sigma * pi + delta);
        let obj = ScalarObjective::AdvGradientPenalty {
            sigma,
            pi,
            delta,
            beta,
        };
        let (lo, hi) = obj.default_bracket();
        let found = scalar_objective_oracle(&obj, lo, hi.max(1.0) * 1.25, 1e-9).unwrap();
        worst = worst.max((found - closed).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        "C01",
        "adv closed form vs golden section",
        worst <= 1e-8 && elapsed.as_secs_f64() < 1.0,
        &format!("worst |gap| = {worst:.3e}, elapsed {elapsed:?}"),
    );
}

#[test]
fn c02_sc_closed_form_agrees_with_golden_section() {
    let start = Instant::now();
    let mut rng = rng_for(102, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sigma = rng.random_range(1e-3..=1.0);
        let pi = rng.random_range(1e-4..=1.0);
        let delta = rng.random_range(0.0..=1.0);
        let beta = rng.random_range(0.05..=2.0);
        let closed = delta / (8.0 * beta * pi);
        let obj = ScalarObjective::SourceCondition {
            sigma,
            pi,
            delta,
            beta,
        };
        let (lo, hi) = obj.default_bracket();
        let found = scalar_objective_oracle(&obj, lo, hi.max(1.0) * 1.25, 1e-9).unwrap();
        worst = worst.max((found - closed).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        "C02",
        "sc closed form vs golden section",
        worst <= 1e-8 && elapsed.as_secs_f64() < 1.0,
        &format!("worst |gap| = {worst:.3e}, elapsed {elapsed:?}"),
    );
}

#[test]
fn c03_erm_oracle_matches_supervised_fit_per_mode() {
    let start = Instant::now();
    let (sys, pi) = reference_system();
    let delta = 0.05;
    let mu = NoiseModel::new(SpectrumProfile::white(delta, 32).unwrap(), NoiseSide::YSide);
    let closed = fit_mse(sys.sigma(), &mu, &pi).unwrap();

    let m_draws = 100_000;
    let mut pairs = Vec::with_capacity(m_draws);
    for i in 0..m_draws {
        let mut rng = rng_for(103, i as u64);
        let xc: Vec<f64> = pi
            .values()
            .iter()
            .map(|p| p.sqrt() * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let yc: Vec<f64> = xc
            .iter()
            .zip(sys.sigma())
            .map(|(x, s)| s * x + delta * rng.sample::<f64, _>(StandardNormal))
            .collect();
        pairs.push((sys.expand_in_u(&xc).unwrap(), sys.expand_in_v(&yc).unwrap()));
    }
    let est = erm_oracle(&pairs, &sys).unwrap();

    let mut worst = (0.0f64, 0usize);
    for n in 0..32 {
        let energy = sys.sigma()[n].powi(2) * pi.values()[n] + delta * delta;
        if energy < 1e-6 {
            continue;
        }
        let rel = (est.g()[n] - closed.g()[n]).abs() / closed.g()[n];
        println!(
            "  mode {:2}: erm {:.6} closed {:.6} rel {:.4}",
            n + 1,
            est.g()[n],
            closed.g()[n],
            rel
        );
        if rel > worst.0 {
            worst = (rel, n + 1);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "C03",
        "per-mode least squares vs supervised fit (3% on every gated mode)",
        worst.0 <= 0.03 && elapsed.as_secs_f64() < 30.0,
        &format!(
            "worst relative gap {:.4} at mode {} (elapsed {elapsed:?}); at M = 1e5 the \
             regression SE at mode n is ~1.58e-4·n², so high modes cannot meet 3%",
            worst.0, worst.1
        ),
    );
}

#[test]
fn c04_error_decomposition_matches_monte_carlo_for_every_paradigm() {
    let start = Instant::now();
    let (sys, pi) = reference_system();
    let sigma = sys.sigma().to_vec();
    let level = 0.05;
    let y_mu = NoiseModel::new(SpectrumProfile::white(level, 32).unwrap(), NoiseSide::YSide);
    let x_mu = NoiseModel::new(SpectrumProfile::white(level, 32).unwrap(), NoiseSide::XSide);
    let nu = NoiseModel::new(SpectrumProfile::white(level, 32).unwrap(), NoiseSide::YSide);

    // Fixed ground truth with the canonical per-mode amplitudes.
    let coeffs: Vec<f64> = pi.values().iter().map(|p| p.sqrt()).collect();
    let x = sys.expand_in_u(&coeffs).unwrap();
    let ax = apply_forward(&sys, &x).unwrap();

    let filters = [
        fit_mse(&sigma, &y_mu, &pi).unwrap(),
        fit_prox(&sigma, &x_mu, &pi).unwrap(),
        fit_post(&sigma, &x_mu, &pi).unwrap(),
        fit_adv(&sigma, &y_mu, &pi, 0.375).unwrap(),
        fit_sc(&sigma, &y_mu, &pi, 0.125).unwrap(),
        pseudo_inverse_filter(&sigma).unwrap(),
        truncated_svd_filter(&sigma, 16).unwrap(),
    ];

    let draws = 10_000;
    let mut all_ok = true;
    let mut detail = String::new();
    for (fi, filter) in filters.iter().enumerate() {
        let closed = expected_error(filter, &sys, DataTerm::FixedVector(&x), nu.profile()).unwrap();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..draws {
            let eps = sample_noise(&nu, &sys, mix_seed(104 + fi as u64, i as u64)).unwrap();
            let y: Vec<f64> = ax.iter().zip(&eps).map(|(a, e)| a + e).collect();
            let rec = reconstruct(&y, filter, &sys).unwrap();
            let err: f64 = rec.iter().zip(&x).map(|(r, t)| (r - t) * (r - t)).sum();
            sum += err;
            sum_sq += err * err;
        }
        let mean = sum / draws as f64;
        let var = (sum_sq / draws as f64 - mean * mean).max(0.0);
        let se = (var / draws as f64).sqrt();
        let ok = (mean - closed.total).abs() <= 3.0 * se;
        println!(
            "  {}: closed {:.6e} mc {:.6e} (3 SE = {:.2e}) {}",
            filter.paradigm(),
            closed.total,
            mean,
            3.0 * se,
            if ok { "ok" } else { "MISMATCH" }
        );
        if !ok {
            all_ok = false;
            detail = format!(
                "{}: closed {} vs MC {} (3 SE = {})",
                filter.paradigm(),
                closed.total,
                mean,
                3.0 * se
            );
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "C04",
        "closed-form decomposition vs Monte Carlo (3 SE, every paradigm)",
        all_ok && elapsed.as_secs_f64() < 60.0,
        &detail,
    );
}

#[test]
fn c05_exact_equivalences_hold_to_1e12() {
    // A non-diagonal system exercises the reconstruction identity honestly.
    let mut rng = rng_for(105, 0);
    let entries: Vec<f64> = (0..20 * 16).map(|_| rng.sample(StandardNormal)).collect();
    let sys = compute_svd(&DenseMatrix::new(20, 16, entries).unwrap(), 0.0).unwrap();
    let sigma = sys.sigma().to_vec();
    let n = sys.n_modes();

    let dt: Vec<f64> = (1..=n).map(|k| 1e-4 / k as f64).collect();
    let pi = SpectrumProfile::power_law(1.0, 2.0, n).unwrap();
    let x_mu = NoiseModel::new(
        SpectrumProfile::explicit(dt.clone()).unwrap(),
        NoiseSide::XSide,
    );
    let mut ok = true;
    let mut detail = String::new();
    let mut check = |name: &str, a: &[f64], b: &[f64]| {
        for (x, y) in a.iter().zip(b) {
            let rel = (x - y).abs() / y.abs().max(f64::MIN_POSITIVE);
            if rel > 1e-12 {
                ok = false;
                detail = format!("{name}: relative gap {rel}");
            }
        }
    };

    // sc(1/8) == mse.
    let y_mu = NoiseModel::new(
        SpectrumProfile::explicit(dt.clone()).unwrap(),
        NoiseSide::YSide,
    );
    let mse = fit_mse(&sigma, &y_mu, &pi).unwrap();
    let sc = fit_sc(&sigma, &y_mu, &pi, 0.125).unwrap();
    check("sc(1/8) vs mse: g", sc.g(), mse.g());
    check("sc(1/8) vs mse: lambda", sc.lambda(), mse.lambda());

    // prox(Δ̃) == mse(Δ) when the profiles coincide.
    let prox = fit_prox(&sigma, &x_mu, &pi).unwrap();
    check("prox vs mse: g", prox.g(), mse.g());

    // post(Δ̃) == mse(Δ) when Δ_n = σ_n² Δ̃_n.
    let transferred: Vec<f64> = dt.iter().zip(&sigma).map(|(d, s)| s * s * d).collect();
    let y_mu2 = NoiseModel::new(
        SpectrumProfile::explicit(transferred).unwrap(),
        NoiseSide::YSide,
    );
    let post = fit_post(&sigma, &x_mu, &pi).unwrap();
    let mse2 = fit_mse(&sigma, &y_mu2, &pi).unwrap();
    check("post vs transferred mse: g", post.g(), mse2.g());
    check(
        "post vs transferred mse: lambda",
        post.lambda(),
        mse2.lambda(),
    );

    // Denoiser after pseudo-inverse == post reconstruction.
    let den = fit_denoiser(&x_mu, &pi).unwrap();
    let pinv = pseudo_inverse_filter(&sigma).unwrap();
    for draw in 0..5 {
        let mut rng = rng_for(1050, draw);
        let y: Vec<f64> = (0..sys.dim_y())
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let direct = reconstruct(&y, &post, &sys).unwrap();
        let composed = denoise(&reconstruct(&y, &pinv, &sys).unwrap(), &den, &sys).unwrap();
        let scale = direct.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (d, c) in direct.iter().zip(&composed) {
            if (d - c).abs() > 1e-12 * scale {
                ok = false;
                detail = format!("denoise∘pinv vs post: gap {} vs {}", d, c);
            }
        }
    }

    verdict(
        "C05",
        "exact paradigm equivalences (1e-12 relative)",
        ok,
        &detail,
    );
}

#[test]
fn c06_perturbation_sweep_reproduces_the_qualitative_ordering() {
    let start = Instant::now();
    let level = 0.001;
    let perturbation = 0.001;
    let dims = [16usize, 32, 64, 128];
    let strategies = [
        parse_paradigm("pinv").unwrap(),
        parse_paradigm("post").unwrap(),
        parse_paradigm("mse").unwrap(),
        parse_paradigm("adv(0.375)").unwrap(),
    ];

    let mut responses = std::collections::BTreeMap::new();
    for &n in &dims {
        let sys = diagonal_system(n);
        // Slowly decaying data: Π_n = n^(-1) (valid at finite truncation).
        let pi = SpectrumProfile::power_law(1.0, 1.0, n).unwrap();
        for strategy in &strategies {
            let norm = continuity_response(
                &sys,
                strategy.as_ref(),
                &pi,
                TrainingNoiseFamily::White,
                level,
                perturbation,
            )
            .unwrap();
            responses.insert((n, strategy.name()), norm);
        }
    }

    let mut ok = true;
    let mut detail = String::new();

    // (a) post tracks the pseudo-inverse within 1% at every dimension.
    for &n in &dims {
        let post = responses[&(n, "post".to_string())];
        let pinv = responses[&(n, "pinv".to_string())];
        let ratio = post / pinv;
        println!("  N={n}: post/pinv response ratio {ratio:.6}");
        if !(0.99..=1.0 + 1e-9).contains(&ratio) {
            ok = false;
            detail = format!("post/pinv ratio {ratio} at N={n} outside [0.99, 1]");
        }
    }

    // (b) supervised and adversarial responses at N=128 sit at least 10x
    // below the pseudo-inverse response.
    let pinv = responses[&(128, "pinv".to_string())];
    for name in ["mse", "adv(0.375)"] {
        let r = responses[&(128, name.to_string())];
        let factor = pinv / r;
        println!("  N=128: pinv/{name} response factor {factor:.3}");
        if factor < 10.0 {
            ok = false;
            detail = format!(
                "{name} response at N=128 is only {factor:.3}x below the pseudo-inverse \
                 (10x required); with white training at 0.001 and Π_n = n^(-1) the \
                 closed-form factor is 1 + 1e-6·N³ = 3.097"
            );
        }
    }

    let elapsed = start.elapsed();
    verdict(
        "C06",
        "perturbation-response ordering across dimensions",
        ok && elapsed.as_secs_f64() < 120.0,
        &detail,
    );
}

#[test]
fn c07_post_processing_error_decays_quadratically_in_the_test_level() {
    let start = Instant::now();
    let cfg =
        ExperimentConfig::load(std::path::Path::new(&config_path("convergence.json"))).unwrap();
    let (_, slopes) = convergence_cells_checked(&cfg, 17, false).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for s in slopes.iter().filter(|s| s.paradigm == "post") {
        println!(
            "  post slope vs test level, family {}: {:.4}",
            s.family, s.slope
        );
        if !(s.slope >= 1.7 && s.slope <= 2.3) {
            ok = false;
            detail = format!("family {}: slope {} outside 2.0±0.3", s.family, s.slope);
        }
    }
    assert_eq!(
        slopes.iter().filter(|s| s.paradigm == "post").count(),
        3,
        "expected three post curves"
    );
    let elapsed = start.elapsed();
    verdict(
        "C07",
        "post-processing log-log slope 2.0±0.3 for all three families",
        ok && elapsed.as_secs_f64() < 60.0,
        &detail,
    );
}

#[test]
fn c08_noise_term_respects_the_finite_dimensional_bound() {
    let cfg =
        ExperimentConfig::load(std::path::Path::new(&config_path("convergence.json"))).unwrap();
    let (cells, _) = convergence_cells_checked(&cfg, 17, false).unwrap();
    let sys = diagonal_system(64);
    let inv_sq_sum: f64 = sys.sigma().iter().map(|s| 1.0 / (s * s)).sum();
    let mut ok = true;
    let mut detail = String::new();
    for cell in &cells {
        let bound = cell.test_level * cell.test_level * inv_sq_sum;
        // Tiny headroom for floating-point roundoff of the two sides.
        if cell.row.noise_term > bound * (1.0 + 1e-12) {
            ok = false;
            detail = format!(
                "{} {} at delta {}: noise {} exceeds bound {}",
                cell.row.paradigm, cell.row.family, cell.row.delta, cell.row.noise_term, bound
            );
        }
    }
    verdict(
        "C08",
        "noise term bounded by level² · Σ σ_n^-2 on every sweep row",
        ok,
        &detail,
    );
}

#[test]
fn c09_supervised_bias_decays_below_1e6_at_delta_1e4() {
    let (sys, pi) = reference_system();
    // Frozen once from the closed form on this exact configuration.
    let golden_at_1e4 = 5.38575972323493e-7;
    let mut last = f64::INFINITY;
    let mut ok = true;
    let mut detail = String::new();
    for delta in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let mu = NoiseModel::new(SpectrumProfile::white(delta, 32).unwrap(), NoiseSide::YSide);
        let f = fit_mse(sys.sigma(), &mu, &pi).unwrap();
        let b = bias(&f, sys.sigma(), &pi).unwrap();
        println!("  delta {delta}: bias {b:.6e}");
        if b >= last {
            ok = false;
            detail = format!("bias did not decrease at delta {delta}");
        }
        if (delta - 1e-4).abs() < 1e-18 {
            if b >= 1e-6 {
                ok = false;
                detail = format!("bias {b} at delta 1e-4 not below 1e-6");
            }
            if (b - golden_at_1e4).abs() > 1e-12 * golden_at_1e4 {
                ok = false;
                detail = format!("bias {b} drifted from frozen value {golden_at_1e4}");
            }
        }
        last = b;
    }
    verdict("C09", "bias decay with frozen golden value", ok, &detail);
}

#[test]
fn c10_condition_checks_return_the_hand_derived_verdicts() {
    let n = 64;
    let sigma: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    let white = SpectrumProfile::white(0.01, n).unwrap();
    let steep = SpectrumProfile::power_law(0.01, 4.0, n).unwrap();
    let steeper = SpectrumProfile::power_law(0.01, 6.0, n).unwrap();
    let pi2 = SpectrumProfile::power_law(1.0, 2.0, n).unwrap();
    let pi_half = SpectrumProfile::power_law(1.0, 0.5, n).unwrap();

    // (paradigm, mu, pi, expected verdict, note)
    let cases: Vec<(Paradigm, &SpectrumProfile, &SpectrumProfile, bool, &str)> = vec![
        // ratio δ²n³ grows
        (Paradigm::Mse, &white, &pi2, true, "mse hold"),
        // ratio δ²n^(-1) decays
        (Paradigm::Mse, &steep, &pi2, false, "mse fail"),
        (Paradigm::Sc { beta: 0.125 }, &white, &pi2, true, "sc hold"),
        (Paradigm::Sc { beta: 0.125 }, &steep, &pi2, false, "sc fail"),
        (Paradigm::Prox, &white, &pi2, true, "prox hold"),
        (Paradigm::Prox, &steep, &pi2, false, "prox fail"),
        // σΔ̃/Π = δ²n grows / δ²n^(-1/2) decays
        (Paradigm::Post, &white, &pi2, true, "post hold"),
        (Paradigm::Post, &white, &pi_half, false, "post fail"),
        // Δ/(σ³Π) = δ²n⁵ grows / δ²n^(-1) decays
        (
            Paradigm::Adv { beta: 0.375 },
            &white,
            &pi2,
            true,
            "adv hold",
        ),
        (
            Paradigm::Adv { beta: 0.375 },
            &steeper,
            &pi2,
            false,
            "adv fail",
        ),
    ];

    let mut ok = true;
    let mut detail = String::new();
    for (paradigm, mu, pi, expected, note) in cases {
        let report =
            check_condition(&paradigm, ConditionKind::Continuity, &sigma, mu, pi, None).unwrap();
        println!(
            "  {note}: holds={} witness={:.3e} slope={:.2}",
            report.holds, report.witness, report.asymptotic_exponent
        );
        if report.holds != expected {
            ok = false;
            detail = format!("{note}: got {}, expected {expected}", report.holds);
        }
    }
    verdict(
        "C10",
        "ten hand-derived continuity verdicts (hold and fail per row)",
        ok,
        &detail,
    );
}

#[test]
fn c11_decomposition_quality_on_tomography_and_random_matrices() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut check = |label: &str, a: &DenseMatrix| {
        let sys = compute_svd(a, 0.0).unwrap();
        let ortho = sys.orthonormality_defect();
        let recon = sys.reconstruction_defect(a);
        let sigma1 = sys.sigma()[0];
        if ortho > 1e-10 || recon > 1e-8 * sigma1 {
            ok = false;
            detail = format!(
                "{label}: orthonormality defect {ortho:.2e}, reconstruction {recon:.2e} \
                 (limit {:.2e})",
                1e-8 * sigma1
            );
        }
    };

    let radon = build_operator(&OperatorSpec::Radon2d {
        side: 16,
        angles: 24,
        detectors: None,
    })
    .unwrap();
    check("radon2d side 16", &radon);

    let shapes = [
        (256usize, 256usize),
        (256, 128),
        (128, 256),
        (200, 150),
        (64, 64),
        (33, 97),
        (97, 33),
        (16, 255),
        (255, 16),
        (50, 50),
        (8, 8),
        (2, 2),
        (5, 3),
        (3, 5),
        (100, 100),
        (160, 240),
        (240, 160),
        (77, 77),
        (256, 1),
        (1, 256),
    ];
    for (i, (r, c)) in shapes.iter().enumerate() {
        let mut rng = rng_for(111, i as u64);
        let entries: Vec<f64> = (0..r * c).map(|_| rng.sample(StandardNormal)).collect();
        let a = DenseMatrix::new(*r, *c, entries).unwrap();
        check(&format!("random {r}x{c}"), &a);
    }

    let elapsed = start.elapsed();
    verdict(
        "C11",
        "orthonormality 1e-10 / reconstruction 1e-8·σ1 on 21 operators",
        ok && elapsed.as_secs_f64() < 120.0,
        &format!("{detail} (elapsed {elapsed:?})"),
    );
}

#[test]
fn c12_same_seed_runs_are_byte_identical() {
    let configs = [
        "continuity.json",
        "convergence.json",
        "recon_grid.json",
        "fit_report.json",
    ];
    let mut ok = true;
    let mut detail = String::new();
    for name in configs {
        let cfg = ExperimentConfig::load(std::path::Path::new(&config_path(name))).unwrap();
        let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
        for dir in &dirs {
            let opts = RunOptions {
                seed: Some(17),
                output_dir: Some(dir.path().to_path_buf()),
                uniform_scaling: false,
            };
            run_experiment(&cfg, &opts).unwrap();
        }
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(!names.is_empty());
        for file in names {
            let a = std::fs::read(dirs[0].path().join(&file)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&file)).unwrap();
            if a != b {
                ok = false;
                detail = format!("{name}: {file:?} differs between same-seed runs");
            }
        }
    }
    verdict(
        "C12",
        "same-seed reruns produce byte-identical outputs",
        ok,
        &detail,
    );
}

fn config_path(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}
