//! Spectral filters: the Tikhonov parameterization, the paradigm fits, and
//! reconstruction.
//!
//! Every filter stores both the coefficients g_n that replace 1/σ_n in the
//! pseudo-inverse and the per-mode weights λ_n of the equivalent variational
//! problem, so a single reconstruction path serves all paradigms.

mod strategy;

pub use strategy::{parse_paradigm, FilterStrategy, StrategyRegistry};

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stochastics::{NoiseModel, NoiseSide, SpectrumProfile};
use crate::system::SingularSystem;

/// Fitting paradigm of a filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Paradigm {
    /// Supervised fit minimizing the expected squared reconstruction error.
    Mse,
    /// Plug-and-play: the learned denoiser used as a proximal map.
    Prox,
    /// Denoiser applied after the pseudo-inverse.
    Post,
    /// Adversarial fit with gradient penalty weight β.
    Adv {
        beta: f64,
    },
    /// Adversarial fit promoting a source condition, penalty weight β.
    Sc {
        beta: f64,
    },
    PseudoInverse,
    TruncatedSvd {
        k: usize,
    },
}

impl Paradigm {
    /// Penalty weight, where the paradigm has one.
    pub fn beta(&self) -> Option<f64> {
        match self {
            Paradigm::Adv { beta } | Paradigm::Sc { beta } => Some(*beta),
            _ => None,
        }
    }

    /// File-name friendly identifier.
    pub fn slug(&self) -> String {
        match self {
            Paradigm::Mse => "mse".into(),
            Paradigm::Prox => "prox".into(),
            Paradigm::Post => "post".into(),
            Paradigm::Adv { beta } => format!("adv_{beta}"),
            Paradigm::Sc { beta } => format!("sc_{beta}"),
            Paradigm::PseudoInverse => "pinv".into(),
            Paradigm::TruncatedSvd { k } => format!("tsvd_{k}"),
        }
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Paradigm::Mse => write!(f, "mse"),
            Paradigm::Prox => write!(f, "prox"),
            Paradigm::Post => write!(f, "post"),
            Paradigm::Adv { beta } => write!(f, "adv({beta})"),
            Paradigm::Sc { beta } => write!(f, "sc({beta})"),
            Paradigm::PseudoInverse => write!(f, "pinv"),
            Paradigm::TruncatedSvd { k } => write!(f, "tsvd({k})"),
        }
    }
}

/// Fitted spectral filter.
///
/// Invariants: λ_n ≥ 0 (possibly +∞ for truncated modes) and g_n finite
/// with g_n = σ_n/(σ_n² + λ_n) for every Tikhonov-form paradigm.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    g: Vec<f64>,
    lambda: Vec<f64>,
    paradigm: Paradigm,
    training_reference: String,
    notes: Vec<String>,
}

impl Filter {
    pub fn from_parts(
        g: Vec<f64>,
        lambda: Vec<f64>,
        paradigm: Paradigm,
        training_reference: String,
    ) -> Result<Self> {
        if g.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                what: "filter coefficients",
                expected: g.len(),
                got: lambda.len(),
            });
        }
        if let Some(i) = g.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NotFinite {
                what: "filter coefficients",
                index: i,
            });
        }
        if let Some(i) = lambda.iter().position(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::NotFinite {
                what: "filter weights",
                index: i,
            });
        }
        Ok(Self {
            g,
            lambda,
            paradigm,
            training_reference,
            notes: Vec::new(),
        })
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn paradigm(&self) -> &Paradigm {
        &self.paradigm
    }

    pub fn training_reference(&self) -> &str {
        &self.training_reference
    }

    /// Fitting remarks, e.g. modes where a 0/0 weight was resolved to the
    /// noiseless limit.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn sup_g(&self) -> f64 {
        self.g.iter().fold(0.0f64, |m, v| m.max(*v))
    }

    /// Per-mode residual factors 1 − σ_n g_n = λ_n/(σ_n² + λ_n), evaluated
    /// from λ so that λ_n = 0 gives exactly zero and truncated modes give
    /// exactly one.
    pub fn residual_factors(&self, sigma: &[f64]) -> Result<Vec<f64>> {
        if sigma.len() != self.len() {
            return Err(Error::DimensionMismatch {
                what: "sigma for residual factors",
                expected: self.len(),
                got: sigma.len(),
            });
        }
        Ok(self
            .lambda
            .iter()
            .zip(sigma)
            .map(|(l, s)| {
                if l.is_infinite() {
                    1.0
                } else {
                    l / (s * s + l)
                }
            })
            .collect())
    }

    /// Check the Tikhonov consistency g_n = σ_n/(σ_n²+λ_n) to the given
    /// relative tolerance.
    pub fn validate(&self, sigma: &[f64], rel_tol: f64) -> Result<()> {
        if sigma.len() != self.len() {
            return Err(Error::DimensionMismatch {
                what: "sigma for validation",
                expected: self.len(),
                got: sigma.len(),
            });
        }
        for (n, ((g, l), s)) in self.g.iter().zip(&self.lambda).zip(sigma).enumerate() {
            let expect = if l.is_infinite() {
                0.0
            } else {
                s / (s * s + l)
            };
            if (g - expect).abs() > rel_tol * expect.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidParameter(format!(
                    "filter mode {}: g = {g} does not match sigma/(sigma^2+lambda) = {expect}",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    /// CSV export with columns `n,sigma,lambda,g`.
    pub fn to_csv_string(&self, sigma: &[f64]) -> Result<String> {
        if sigma.len() != self.len() {
            return Err(Error::DimensionMismatch {
                what: "sigma for filter export",
                expected: self.len(),
                got: sigma.len(),
            });
        }
        let mut out = String::from("n,sigma,lambda,g\n");
        for (n, ((g, l), s)) in self.g.iter().zip(&self.lambda).zip(sigma).enumerate() {
            out.push_str(&format!("{},{s},{l},{g}\n", n + 1));
        }
        Ok(out)
    }

    /// JSON sidecar describing the paradigm and training reference.
    pub fn sidecar_json(&self) -> String {
        let value = serde_json::json!({
            "paradigm": self.paradigm.to_string(),
            "beta": self.paradigm.beta(),
            "training_reference": self.training_reference,
            "notes": self.notes,
        });
        serde_json::to_string_pretty(&value).expect("sidecar serializes")
    }

    pub fn save_csv_with_sidecar(&self, sigma: &[f64], csv_path: &Path) -> Result<()> {
        std::fs::write(csv_path, self.to_csv_string(sigma)?)?;
        let sidecar = csv_path.with_extension("json");
        std::fs::write(sidecar, self.sidecar_json())?;
        Ok(())
    }
}

/// Learned spectral denoiser d_n = 1/(1 + λ_n) acting mode-wise in X.
#[derive(Debug, Clone, PartialEq)]
pub struct Denoiser {
    d: Vec<f64>,
    lambda: Vec<f64>,
    training_reference: String,
}

impl Denoiser {
    pub fn coefficients(&self) -> &[f64] {
        &self.d
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn training_reference(&self) -> &str {
        &self.training_reference
    }
}

fn describe(training: &NoiseModel, pi: &SpectrumProfile) -> String {
    format!(
        "training noise: {} {} (level {}); data profile: {}",
        training.side(),
        training.profile().family().slug(),
        training.level(),
        pi.family().slug()
    )
}

fn check_lengths(sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<()> {
    if training.n_modes() != sigma.len() {
        return Err(Error::DimensionMismatch {
            what: "training noise modes",
            expected: sigma.len(),
            got: training.n_modes(),
        });
    }
    if pi.len() != sigma.len() {
        return Err(Error::DimensionMismatch {
            what: "data profile modes",
            expected: sigma.len(),
            got: pi.len(),
        });
    }
    if let Some(i) = sigma.iter().position(|s| *s <= 0.0 || !s.is_finite()) {
        return Err(Error::NotFinite {
            what: "sigma",
            index: i,
        });
    }
    Ok(())
}

fn check_side(training: &NoiseModel, expected: NoiseSide) -> Result<()> {
    if training.side() != expected {
        return Err(Error::WrongNoiseSide {
            expected,
            got: training.side(),
        });
    }
    Ok(())
}

fn positive_pi(pi: &SpectrumProfile) -> Result<()> {
    if let Some(mode) = pi.values().iter().position(|v| *v == 0.0) {
        return Err(Error::AssumptionViolated { mode: mode + 1 });
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParameter(
            "penalty weight beta must be positive".into(),
        ));
    }
    Ok(())
}

fn tikhonov_filter(
    sigma: &[f64],
    lambda: Vec<f64>,
    paradigm: Paradigm,
    training_reference: String,
) -> Filter {
    let g = sigma
        .iter()
        .zip(&lambda)
        .map(|(s, l)| s / (s * s + l))
        .collect();
    Filter {
        g,
        lambda,
        paradigm,
        training_reference,
        notes: Vec::new(),
    }
}

/// Supervised fit: λ_n = Δ_n/Π_n, g_n = σ_n/(σ_n² + Δ_n/Π_n).
///
/// Training noise must live in the measurement space. Any Π_n = 0 violates
/// the trace-class assumption and is rejected with the offending mode.
pub fn fit_mse(sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
    check_lengths(sigma, training, pi)?;
    check_side(training, NoiseSide::YSide)?;
    positive_pi(pi)?;
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .map(|(d, p)| d / p)
        .collect();
    Ok(tikhonov_filter(
        sigma,
        lambda,
        Paradigm::Mse,
        describe(training, pi),
    ))
}

/// Plug-and-play fit: the mse-denoiser's weights λ_n = Δ̃_n/Π_n inserted
/// into the variational problem. Training noise lives in X.
pub fn fit_prox(sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
    check_lengths(sigma, training, pi)?;
    check_side(training, NoiseSide::XSide)?;
    positive_pi(pi)?;
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .map(|(d, p)| d / p)
        .collect();
    Ok(tikhonov_filter(
        sigma,
        lambda,
        Paradigm::Prox,
        describe(training, pi),
    ))
}

/// Post-processing fit: the mse-denoiser composed with the pseudo-inverse,
/// λ_n = σ_n²·Δ̃_n/Π_n. Training noise lives in X.
pub fn fit_post(sigma: &[f64], training: &NoiseModel, pi: &SpectrumProfile) -> Result<Filter> {
    check_lengths(sigma, training, pi)?;
    check_side(training, NoiseSide::XSide)?;
    positive_pi(pi)?;
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .zip(sigma)
        .map(|((d, p), s)| s * s * (d / p))
        .collect();
    Ok(tikhonov_filter(
        sigma,
        lambda,
        Paradigm::Post,
        describe(training, pi),
    ))
}

/// Adversarial fit with gradient penalty:
/// λ_n = (3/(8β)) · Δ_n/(3σ_n²Π_n + Δ_n).
///
/// Π_n = 0 is tolerated as long as Δ_n > 0; a 0/0 mode is resolved to the
/// noiseless limit λ_n = 0 and recorded in the filter notes.
pub fn fit_adv(
    sigma: &[f64],
    training: &NoiseModel,
    pi: &SpectrumProfile,
    beta: f64,
) -> Result<Filter> {
    check_lengths(sigma, training, pi)?;
    check_side(training, NoiseSide::YSide)?;
    check_beta(beta)?;
    let coeff = 3.0 / (8.0 * beta);
    let mut notes = Vec::new();
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .zip(sigma)
        .enumerate()
        .map(|(n, ((d, p), s))| {
            let denom = 3.0 * s * s * p + d;
            if denom == 0.0 {
                notes.push(format!(
                    "mode {}: 0/0 weight resolved to the noiseless limit lambda = 0",
                    n + 1
                ));
                0.0
            } else {
                coeff * d / denom
            }
        })
        .collect();
    let mut filter = tikhonov_filter(
        sigma,
        lambda,
        Paradigm::Adv { beta },
        describe(training, pi),
    );
    filter.notes = notes;
    Ok(filter)
}

/// Adversarial fit promoting a source condition: λ_n = (1/(8β)) · Δ_n/Π_n.
/// β = 1/8 reproduces the supervised fit exactly.
pub fn fit_sc(
    sigma: &[f64],
    training: &NoiseModel,
    pi: &SpectrumProfile,
    beta: f64,
) -> Result<Filter> {
    check_lengths(sigma, training, pi)?;
    check_side(training, NoiseSide::YSide)?;
    check_beta(beta)?;
    positive_pi(pi)?;
    let coeff = 1.0 / (8.0 * beta);
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .map(|(d, p)| coeff * (d / p))
        .collect();
    Ok(tikhonov_filter(
        sigma,
        lambda,
        Paradigm::Sc { beta },
        describe(training, pi),
    ))
}

/// Optimal spectral denoiser for X-side noise: d_n = 1/(1 + Δ̃_n/Π_n).
pub fn fit_denoiser(training: &NoiseModel, pi: &SpectrumProfile) -> Result<Denoiser> {
    if training.n_modes() != pi.len() {
        return Err(Error::DimensionMismatch {
            what: "denoiser profile modes",
            expected: pi.len(),
            got: training.n_modes(),
        });
    }
    check_side(training, NoiseSide::XSide)?;
    positive_pi(pi)?;
    let lambda: Vec<f64> = training
        .profile()
        .values()
        .iter()
        .zip(pi.values())
        .map(|(d, p)| d / p)
        .collect();
    let d = lambda.iter().map(|l| 1.0 / (1.0 + l)).collect();
    Ok(Denoiser {
        d,
        lambda,
        training_reference: describe(training, pi),
    })
}

/// g_n = 1/σ_n with λ_n = 0: the pseudo-inverse as a (boundary) filter.
pub fn pseudo_inverse_filter(sigma: &[f64]) -> Result<Filter> {
    if sigma.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if let Some(i) = sigma.iter().position(|s| *s <= 0.0 || !s.is_finite()) {
        return Err(Error::NotFinite {
            what: "sigma",
            index: i,
        });
    }
    let g = sigma.iter().map(|s| 1.0 / s).collect();
    Filter::from_parts(
        g,
        vec![0.0; sigma.len()],
        Paradigm::PseudoInverse,
        "none (naive inversion)".into(),
    )
}

/// Pseudo-inverse restricted to the leading k modes; λ_n = +∞ beyond k.
pub fn truncated_svd_filter(sigma: &[f64], k: usize) -> Result<Filter> {
    if k == 0 || k > sigma.len() {
        return Err(Error::InvalidParameter(format!(
            "truncation level k = {k} out of range 1..={}",
            sigma.len()
        )));
    }
    let g = sigma
        .iter()
        .enumerate()
        .map(|(n, s)| if n < k { 1.0 / s } else { 0.0 })
        .collect();
    let lambda = (0..sigma.len())
        .map(|n| if n < k { 0.0 } else { f64::INFINITY })
        .collect();
    Filter::from_parts(
        g,
        lambda,
        Paradigm::TruncatedSvd { k },
        "none (spectral cutoff)".into(),
    )
}

/// Spectral reconstruction R(y; g) = Σ_n g_n ⟨y, v_n⟩ u_n.
pub fn reconstruct(y: &[f64], filter: &Filter, sys: &SingularSystem) -> Result<Vec<f64>> {
    if filter.len() != sys.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "filter modes",
            expected: sys.n_modes(),
            got: filter.len(),
        });
    }
    let mut coeffs = sys.project_onto_v(y)?;
    for (c, g) in coeffs.iter_mut().zip(filter.g()) {
        *c *= g;
    }
    sys.expand_in_u(&coeffs)
}

/// Apply the spectral denoiser: Σ_n d_n ⟨x, u_n⟩ u_n.
///
/// NOTE: the denoiser is only defined on span{u_n}; any component of `x`
/// outside the retained row space is annihilated, not preserved. A generic
/// image denoiser would pass it through; this one reconstructs in
/// N(A)⊥ only.
pub fn denoise(x: &[f64], denoiser: &Denoiser, sys: &SingularSystem) -> Result<Vec<f64>> {
    if denoiser.len() != sys.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "denoiser modes",
            expected: sys.n_modes(),
            got: denoiser.len(),
        });
    }
    let mut coeffs = sys.project_onto_u(x)?;
    for (c, d) in coeffs.iter_mut().zip(denoiser.coefficients()) {
        *c *= d;
    }
    sys.expand_in_u(&coeffs)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::stochastics::NoiseModel;

    fn y_noise(values: Vec<f64>) -> NoiseModel {
        NoiseModel::new(SpectrumProfile::explicit(values).unwrap(), NoiseSide::YSide)
    }

    fn x_noise(values: Vec<f64>) -> NoiseModel {
        NoiseModel::new(SpectrumProfile::explicit(values).unwrap(), NoiseSide::XSide)
    }

    fn pi(values: Vec<f64>) -> SpectrumProfile {
        SpectrumProfile::explicit(values).unwrap()
    }

    #[test]
    fn mse_formula_example() {
        let f = fit_mse(&[0.5], &y_noise(vec![0.0625]), &pi(vec![0.25])).unwrap();
        assert!((f.lambda()[0] - 0.25).abs() < 1e-15);
        assert!((f.g()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_noise_gives_pseudo_inverse() {
        let sigma = [1.0, 0.5, 0.25];
        let data = pi(vec![1.0, 0.5, 0.25]);
        let fits = [
            fit_mse(&sigma, &y_noise(vec![0.0; 3]), &data).unwrap(),
            fit_prox(&sigma, &x_noise(vec![0.0; 3]), &data).unwrap(),
            fit_post(&sigma, &x_noise(vec![0.0; 3]), &data).unwrap(),
            fit_adv(&sigma, &y_noise(vec![0.0; 3]), &data, 0.375).unwrap(),
            fit_sc(&sigma, &y_noise(vec![0.0; 3]), &data, 0.125).unwrap(),
        ];
        for f in &fits {
            for (g, s) in f.g().iter().zip(&sigma) {
                assert!((g - 1.0 / s).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn growing_noise_shrinks_g_monotonically() {
        let mut last = f64::INFINITY;
        for d in [0.0, 0.01, 0.1, 1.0, 10.0, 1e4] {
            let f = fit_mse(&[0.5], &y_noise(vec![d]), &pi(vec![0.5])).unwrap();
            assert!(f.g()[0] <= last);
            last = f.g()[0];
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn zero_pi_names_the_mode() {
        let err = fit_mse(&[1.0, 1.0], &y_noise(vec![0.1, 0.1]), &pi(vec![1.0, 0.0])).unwrap_err();
        match err {
            Error::AssumptionViolated { mode } => assert_eq!(mode, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_side_is_rejected() {
        let err = fit_mse(&[1.0], &x_noise(vec![0.1]), &pi(vec![1.0])).unwrap_err();
        assert!(matches!(err, Error::WrongNoiseSide { .. }));
        let err = fit_prox(&[1.0], &y_noise(vec![0.1]), &pi(vec![1.0])).unwrap_err();
        assert!(matches!(err, Error::WrongNoiseSide { .. }));
    }

    #[test]
    fn denoiser_examples() {
        let d0 = fit_denoiser(&x_noise(vec![0.0, 0.0]), &pi(vec![1.0, 2.0])).unwrap();
        assert_eq!(d0.coefficients(), &[1.0, 1.0]);
        let dh = fit_denoiser(&x_noise(vec![0.3, 0.7]), &pi(vec![0.3, 0.7])).unwrap();
        assert_eq!(dh.coefficients(), &[0.5, 0.5]);
    }

    #[test]
    fn prox_matches_definition() {
        let sigma = [0.8, 0.3, 0.05];
        let dt = [0.04, 0.02, 0.01];
        let pv = [1.0, 0.5, 0.125];
        let f = fit_prox(&sigma, &x_noise(dt.to_vec()), &pi(pv.to_vec())).unwrap();
        for n in 0..3 {
            let expect = sigma[n] / (sigma[n] * sigma[n] + dt[n] / pv[n]);
            assert!((f.g()[n] - expect).abs() <= 1e-15 * expect);
        }
    }

    #[test]
    fn post_is_denoiser_after_pseudo_inverse_per_mode() {
        let sigma = [0.9, 0.4, 0.2];
        let training = x_noise(vec![0.05, 0.03, 0.01]);
        let data = pi(vec![1.0, 0.25, 0.04]);
        let f = fit_post(&sigma, &training, &data).unwrap();
        let d = fit_denoiser(&training, &data).unwrap();
        for n in 0..3 {
            let composed = d.coefficients()[n] / sigma[n];
            assert!((f.g()[n] - composed).abs() <= 1e-15 * composed.abs());
        }
    }

    #[test]
    fn adv_formula_example_and_bound() {
        let f = fit_adv(&[1.0], &y_noise(vec![3.0]), &pi(vec![1.0]), 0.375).unwrap();
        assert!((f.lambda()[0] - 0.5).abs() < 1e-15);
        assert!((f.g()[0] - 1.0 / 1.5).abs() < 1e-15);

        let sigma = [1.0, 0.5, 0.1];
        let beta = 0.7;
        let f = fit_adv(
            &sigma,
            &y_noise(vec![0.5, 0.25, 0.125]),
            &pi(vec![1.0, 0.5, 0.25]),
            beta,
        )
        .unwrap();
        for l in f.lambda() {
            assert!(*l < 3.0 / (8.0 * beta));
        }
    }

    #[test]
    fn adv_resolves_zero_over_zero_with_note() {
        let f = fit_adv(
            &[1.0, 1.0],
            &y_noise(vec![0.0, 0.1]),
            &pi(vec![0.0, 1.0]),
            0.375,
        )
        .unwrap();
        assert_eq!(f.lambda()[0], 0.0);
        assert_eq!(f.notes().len(), 1);
        assert!(f.notes()[0].contains("mode 1"));
    }

    #[test]
    fn sc_is_linear_in_inverse_beta() {
        let sigma = [1.0, 0.5];
        let mu = y_noise(vec![0.2, 0.1]);
        let data = pi(vec![0.8, 0.4]);
        let f8 = fit_sc(&sigma, &mu, &data, 0.125).unwrap();
        let f4 = fit_sc(&sigma, &mu, &data, 0.25).unwrap();
        let mse = fit_mse(&sigma, &mu, &data).unwrap();
        for n in 0..2 {
            assert_eq!(f8.lambda()[n], mse.lambda()[n]);
            assert!((f4.lambda()[n] - 0.5 * mse.lambda()[n]).abs() < 1e-16);
        }
        assert!(fit_sc(&sigma, &mu, &data, 0.0).is_err());
    }

    #[test]
    fn truncation_guards_and_limits() {
        let sigma = [2.0, 1.0, 0.5];
        assert!(truncated_svd_filter(&sigma, 0).is_err());
        assert!(truncated_svd_filter(&sigma, 4).is_err());
        let full = truncated_svd_filter(&sigma, 3).unwrap();
        let pinv = pseudo_inverse_filter(&sigma).unwrap();
        assert_eq!(full.g(), pinv.g());
        let cut = truncated_svd_filter(&sigma, 1).unwrap();
        assert_eq!(cut.g()[1], 0.0);
        assert!(cut.lambda()[2].is_infinite());
    }

    #[test]
    fn residual_factor_is_exact_at_boundaries() {
        let sigma = [0.3, 0.7];
        let pinv = pseudo_inverse_filter(&sigma).unwrap();
        assert_eq!(pinv.residual_factors(&sigma).unwrap(), vec![0.0, 0.0]);
        let cut = truncated_svd_filter(&sigma, 1).unwrap();
        assert_eq!(cut.residual_factors(&sigma).unwrap()[1], 1.0);
    }

    #[test]
    fn shrinkage_bound_holds_with_equality_iff_lambda_zero() {
        let sigma = [1.0, 0.4, 0.04];
        let f = fit_mse(
            &sigma,
            &y_noise(vec![0.0, 0.01, 0.2]),
            &pi(vec![1.0, 0.6, 0.3]),
        )
        .unwrap();
        for n in 0..3 {
            assert!(f.g()[n] > 0.0);
            assert!(f.g()[n] <= 1.0 / sigma[n] + 1e-18);
            let at_bound = (f.g()[n] - 1.0 / sigma[n]).abs() < 1e-18;
            assert_eq!(at_bound, f.lambda()[n] == 0.0);
        }
    }
}
