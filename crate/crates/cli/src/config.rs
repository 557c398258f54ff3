//! Experiment configuration: JSON schema, parsing with field-path errors,
//! and semantic validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use specreg_core::filters::StrategyRegistry;
use specreg_core::operators::OperatorSpec;
use specreg_core::stochastics::TrainingNoiseFamily;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ContinuitySweep,
    ConvergenceSweep,
    ReconGrid,
    FitReport,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::ContinuitySweep => "continuity_sweep",
            ExperimentKind::ConvergenceSweep => "convergence_sweep",
            ExperimentKind::ReconGrid => "recon_grid",
            ExperimentKind::FitReport => "fit_report",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "continuity_sweep" => Some(Self::ContinuitySweep),
            "convergence_sweep" => Some(Self::ConvergenceSweep),
            "recon_grid" => Some(Self::ReconGrid),
            "fit_report" => Some(Self::FitReport),
            _ => None,
        }
    }
}

/// Data distribution description: an analytic power law Π_n = n^(-q) or a
/// corpus file the profile is estimated from.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_path: Option<PathBuf>,
}

/// Noise description as it appears in configs: a family plus an optional
/// level. The harness assigns the basis side per paradigm (measurement-space
/// noise for mse/adv/sc, reconstruction-space noise for prox/post).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(flatten)]
    pub family: TrainingNoiseFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            family: TrainingNoiseFamily::White,
            delta: None,
        }
    }
}

fn default_delta_grid() -> Vec<f64> {
    // Five log-spaced points from 1e-1 down to 1e-3.
    vec![1e-1, 10f64.powf(-1.5), 1e-2, 10f64.powf(-2.5), 1e-3]
}

fn default_test_noise() -> Vec<NoiseSpec> {
    vec![
        NoiseSpec {
            family: TrainingNoiseFamily::White,
            delta: None,
        },
        NoiseSpec {
            family: TrainingNoiseFamily::PowerLaw { exponent: 0.5 },
            delta: None,
        },
        NoiseSpec {
            family: TrainingNoiseFamily::PowerLaw { exponent: 4.0 },
            delta: None,
        },
    ]
}

fn default_corpus_count() -> usize {
    400
}

fn default_perturbation() -> f64 {
    0.001
}

/// Full experiment description. Serialized back verbatim into run manifests.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub operator: OperatorSpec,
    #[serde(default)]
    pub data: DataSpec,
    #[serde(default)]
    pub training_noise: NoiseSpec,
    #[serde(default = "default_test_noise")]
    pub test_noise: Vec<NoiseSpec>,
    #[serde(default = "default_delta_grid")]
    pub delta_grid: Vec<f64>,
    pub paradigms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub output_dir: PathBuf,
    /// Dimension grid of the continuity sweep (diagonal operators only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Vec<usize>>,
    /// Norm of the fixed perturbation reconstructed by the continuity sweep.
    #[serde(default = "default_perturbation")]
    pub perturbation: f64,
    /// Relative singular value cutoff passed to the decomposition.
    #[serde(default)]
    pub rank_tol: f64,
    /// Corpus size when the data profile is estimated from phantoms.
    #[serde(default = "default_corpus_count")]
    pub corpus_count: usize,
    /// Optional matrix CSV overriding `operator` for svd/fit/reconstruct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_csv: Option<PathBuf>,
    /// Measurement vector (one-column matrix CSV) for `reconstruct`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement_csv: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parse JSON, reporting the offending field path on error.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::Config(vec![format!("{}: {}", e.path(), e.inner())]))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(vec![format!("{}: {e}", path.display())]))?;
        Self::from_json(&text)
    }

    /// Semantic validation; collects every violation with its field path.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errors = Vec::new();

        if self.delta_grid.is_empty() {
            errors.push("delta_grid: must be nonempty".into());
        }
        if self.delta_grid.iter().any(|d| *d <= 0.0 || !d.is_finite()) {
            errors.push("delta_grid: all levels must be positive and finite".into());
        }
        if self.delta_grid.windows(2).any(|w| w[0] <= w[1]) {
            errors.push("delta_grid: must be strictly decreasing".into());
        }

        if self.paradigms.is_empty() {
            errors.push("paradigms: must name at least one paradigm".into());
        }
        let registry = StrategyRegistry::builtin();
        for (i, name) in self.paradigms.iter().enumerate() {
            if let Err(e) = registry.parse(name) {
                errors.push(format!("paradigms[{i}]: {e}"));
            }
        }

        match (&self.data.analytic_q, &self.data.corpus_path) {
            (Some(_), Some(_)) => {
                errors.push("data: give either analytic_q or corpus_path, not both".into())
            }
            (Some(q), None) => {
                if *q <= 1.0 || !q.is_finite() {
                    errors.push(format!(
                        "data.analytic_q: q = {q} violates the trace-class requirement q > 1"
                    ));
                }
            }
            (None, None) => {
                // Tomography estimates its profile from generated phantoms.
                if !matches!(self.operator, OperatorSpec::Radon2d { .. }) {
                    errors
                        .push("data: analytic_q or corpus_path required for this operator".into());
                }
            }
            (None, Some(path)) => {
                if !path.exists() {
                    errors.push(format!("data.corpus_path: {} not found", path.display()));
                }
            }
        }

        if let Some(delta) = self.training_noise.delta {
            if delta <= 0.0 || !delta.is_finite() {
                errors.push("training_noise.delta: must be positive".into());
            }
        }
        if let TrainingNoiseFamily::PowerLaw { exponent } = self.training_noise.family {
            if exponent < 0.0 {
                errors.push("training_noise.exponent: must be nonnegative".into());
            }
        }
        for (i, spec) in self.test_noise.iter().enumerate() {
            if let TrainingNoiseFamily::PowerLaw { exponent } = spec.family {
                if exponent < 0.0 {
                    errors.push(format!("test_noise[{i}].exponent: must be nonnegative"));
                }
            }
        }

        if self.perturbation <= 0.0 || !self.perturbation.is_finite() {
            errors.push("perturbation: must be positive".into());
        }
        if self.rank_tol < 0.0 || !self.rank_tol.is_finite() {
            errors.push("rank_tol: must be nonnegative".into());
        }
        if self.corpus_count == 0 {
            errors.push("corpus_count: must be positive".into());
        }

        match self.experiment {
            ExperimentKind::ContinuitySweep => {
                if !matches!(self.operator, OperatorSpec::Diagonal { .. }) {
                    errors.push(
                        "operator.kind: the continuity sweep varies the dimension and is \
                         defined for diagonal operators"
                            .into(),
                    );
                }
                if let Some(dims) = &self.dimensions {
                    if dims.is_empty() || dims.contains(&0) {
                        errors.push("dimensions: must be positive".into());
                    }
                }
            }
            ExperimentKind::ReconGrid => match self.operator {
                OperatorSpec::Radon2d { side, .. } if side <= 32 => {}
                OperatorSpec::Radon2d { side, .. } => {
                    errors.push(format!(
                        "operator.side: recon_grid is desk-scale, side {side} exceeds 32"
                    ));
                }
                _ => errors.push("operator.kind: recon_grid requires radon2d".into()),
            },
            ExperimentKind::ConvergenceSweep => {
                if self.test_noise.is_empty() {
                    errors.push("test_noise: convergence sweep needs at least one family".into());
                }
                if self.delta_grid.len() < 2 {
                    errors.push("delta_grid: slope fits need at least two levels".into());
                }
            }
            ExperimentKind::FitReport => {}
        }

        if let Err(e) = self.operator.validate() {
            errors.push(format!("operator: {e}"));
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(errors))
        }
    }

    /// Dimension grid for the continuity sweep.
    pub fn continuity_dimensions(&self) -> Vec<usize> {
        self.dimensions
            .clone()
            .unwrap_or_else(|| vec![16, 32, 64, 128])
    }

    /// Training level used by experiments that fit at a single level.
    pub fn training_level(&self) -> f64 {
        self.training_noise.delta.unwrap_or(0.001)
    }
}
