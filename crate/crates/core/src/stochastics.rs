//! Noise and data distribution models diagonal in the singular basis.
//!
//! A `SpectrumProfile` stores per-mode second moments (raw, no mean
//! subtraction). Noise models bind a profile to one side of the operator:
//! Y-side noise is expanded in the v-basis, X-side noise in the u-basis.

use std::fmt;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_for;
use crate::system::SingularSystem;

/// Which singular basis a noise model lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSide {
    /// Expanded in u_n; per-mode variances play the role of Δ̃_n.
    XSide,
    /// Expanded in v_n; per-mode variances play the role of Δ_n.
    YSide,
}

impl fmt::Display for NoiseSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSide::XSide => write!(f, "X-side"),
            NoiseSide::YSide => write!(f, "Y-side"),
        }
    }
}

/// Analytic family tag of a spectrum profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileFamily {
    /// Constant per-mode variance level².
    White { level: f64 },
    /// level² · n^(-exponent).
    PowerLaw { level: f64, exponent: f64 },
    /// Hand-provided values.
    Explicit,
    /// Estimated from samples.
    Empirical { sample_count: usize },
}

impl ProfileFamily {
    /// Slug used in file names and CSV columns.
    pub fn slug(&self) -> String {
        match self {
            ProfileFamily::White { .. } => "white".into(),
            ProfileFamily::PowerLaw { exponent, .. } => format!("power_law_{exponent}"),
            ProfileFamily::Explicit => "explicit".into(),
            ProfileFamily::Empirical { .. } => "empirical".into(),
        }
    }
}

/// Nonnegative per-mode variance sequence with its family tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    values: Vec<f64>,
    family: ProfileFamily,
}

impl SpectrumProfile {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        Self::checked(values, ProfileFamily::Explicit)
    }

    /// Constant profile: every mode carries level².
    pub fn white(level: f64, n_modes: usize) -> Result<Self> {
        if level < 0.0 || !level.is_finite() {
            return Err(Error::InvalidParameter(
                "white noise level must be nonnegative".into(),
            ));
        }
        Self::checked(vec![level * level; n_modes], ProfileFamily::White { level })
    }

    /// Power-law profile: level² · n^(-exponent), n = 1..=n_modes.
    pub fn power_law(level: f64, exponent: f64, n_modes: usize) -> Result<Self> {
        if level < 0.0 || !level.is_finite() || !exponent.is_finite() {
            return Err(Error::InvalidParameter(
                "power-law level must be nonnegative and finite".into(),
            ));
        }
        let values = (1..=n_modes)
            .map(|n| level * level * (n as f64).powf(-exponent))
            .collect();
        Self::checked(values, ProfileFamily::PowerLaw { level, exponent })
    }

    pub fn empirical(values: Vec<f64>, sample_count: usize) -> Result<Self> {
        Self::checked(values, ProfileFamily::Empirical { sample_count })
    }

    fn checked(values: Vec<f64>, family: ProfileFamily) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(i) = values.iter().position(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::NotFinite {
                what: "profile values",
                index: i,
            });
        }
        Ok(Self { values, family })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn family(&self) -> &ProfileFamily {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Modes (0-based) whose variance is exactly zero. Downstream fits decide
    /// how to react; estimators only flag them.
    pub fn zero_modes(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// sqrt(sup_n values_n): the statistical noise level of the profile.
    pub fn level(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(*v)).sqrt()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("n,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{v}\n", i + 1));
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if idx == 0 {
                if line.trim() != "n,value" {
                    return Err(Error::CsvParse {
                        line: 1,
                        what: format!("expected header \"n,value\", found {line:?}"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let n: usize = fields
                .next()
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| Error::CsvParse {
                    line: idx + 1,
                    what: "invalid mode index".into(),
                })?;
            if n != values.len() + 1 {
                return Err(Error::CsvParse {
                    line: idx + 1,
                    what: format!("mode indices must be consecutive from 1, found {n}"),
                });
            }
            let v: f64 = fields
                .next()
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| Error::CsvParse {
                    line: idx + 1,
                    what: "invalid value".into(),
                })?;
            values.push(v);
        }
        Self::explicit(values)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

/// Zero-mean Gaussian noise with covariance diagonal in a singular basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    profile: SpectrumProfile,
    side: NoiseSide,
}

impl NoiseModel {
    pub fn new(profile: SpectrumProfile, side: NoiseSide) -> Self {
        Self { profile, side }
    }

    pub fn profile(&self) -> &SpectrumProfile {
        &self.profile
    }

    pub fn side(&self) -> NoiseSide {
        self.side
    }

    pub fn n_modes(&self) -> usize {
        self.profile.len()
    }

    /// Statistical noise level 𝛅 = sqrt(sup_n per-mode variance).
    pub fn level(&self) -> f64 {
        self.profile.level()
    }

    pub fn on_side(mut self, side: NoiseSide) -> Self {
        self.side = side;
        self
    }
}

/// Statistical noise level of a model (sup-definition over modes).
pub fn noise_level(model: &NoiseModel) -> f64 {
    model.level()
}

/// One seeded draw: ε = Σ_n sqrt(values_n) ξ_n b_n with ξ i.i.d. standard
/// normal and b the u- or v-basis depending on the model's side.
pub fn sample_noise(model: &NoiseModel, sys: &SingularSystem, seed: u64) -> Result<Vec<f64>> {
    if model.n_modes() != sys.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "noise profile modes",
            expected: sys.n_modes(),
            got: model.n_modes(),
        });
    }
    let mut rng = rng_for(seed, 0);
    let coeffs: Vec<f64> = model
        .profile
        .values()
        .iter()
        .map(|v| {
            let xi: f64 = rng.sample(StandardNormal);
            v.sqrt() * xi
        })
        .collect();
    match model.side {
        NoiseSide::XSide => sys.expand_in_u(&coeffs),
        NoiseSide::YSide => sys.expand_in_v(&coeffs),
    }
}

/// Empirical second moments of sample projections onto one singular basis.
/// No mean subtraction: values_n = (1/M) Σ_i ⟨s_i, b_n⟩².
pub fn estimate_profile(
    samples: &[Vec<f64>],
    sys: &SingularSystem,
    side: NoiseSide,
) -> Result<SpectrumProfile> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut acc = vec![0.0; sys.n_modes()];
    for s in samples {
        let coeffs = match side {
            NoiseSide::XSide => sys.project_onto_u(s)?,
            NoiseSide::YSide => sys.project_onto_v(s)?,
        };
        for (a, c) in acc.iter_mut().zip(&coeffs) {
            *a += c * c;
        }
    }
    let m = samples.len() as f64;
    for a in acc.iter_mut() {
        *a /= m;
    }
    SpectrumProfile::empirical(acc, samples.len())
}

/// Families accepted by the a-priori training-noise rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrainingNoiseFamily {
    White,
    PowerLaw { exponent: f64 },
}

impl TrainingNoiseFamily {
    /// The rule's per-mode lower-bound function ℓ(n) (1-based mode index).
    pub fn lower_bound(&self, n: usize) -> f64 {
        match self {
            TrainingNoiseFamily::White => 1.0,
            TrainingNoiseFamily::PowerLaw { exponent } => (n as f64).powf(-exponent),
        }
    }
}

/// A-priori training-noise choice at level `delta`: white gives Δ_n = δ²,
/// power-law gives Δ_n = δ²·n^(-r). The profile satisfies
/// Δ_n ≥ δ²·ℓ(n) with ℓ the family's lower-bound function.
pub fn training_noise_rule(
    delta: f64,
    family: TrainingNoiseFamily,
    n_modes: usize,
    side: NoiseSide,
) -> Result<NoiseModel> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParameter(
            "training noise level must be positive".into(),
        ));
    }
    let profile = match family {
        TrainingNoiseFamily::White => SpectrumProfile::white(delta, n_modes)?,
        TrainingNoiseFamily::PowerLaw { exponent } => {
            if exponent < 0.0 {
                return Err(Error::InvalidParameter(
                    "training noise exponent must be nonnegative".into(),
                ));
            }
            SpectrumProfile::power_law(delta, exponent, n_modes)?
        }
    };
    Ok(NoiseModel::new(profile, side))
}

/// Data distribution: either an explicit per-mode variance profile or a
/// corpus the profile is estimated from.
#[derive(Debug, Clone)]
pub enum DataModel {
    Explicit(SpectrumProfile),
    Corpus(Vec<Vec<f64>>),
}

impl DataModel {
    /// Per-mode second moments in the u-basis of `sys`.
    pub fn pi(&self, sys: &SingularSystem) -> Result<SpectrumProfile> {
        match self {
            DataModel::Explicit(p) => {
                if p.len() != sys.n_modes() {
                    return Err(Error::DimensionMismatch {
                        what: "data profile modes",
                        expected: sys.n_modes(),
                        got: p.len(),
                    });
                }
                Ok(p.clone())
            }
            DataModel::Corpus(samples) => estimate_profile(samples, sys, NoiseSide::XSide),
        }
    }
}
