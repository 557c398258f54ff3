//! Crate-wide error type.

use crate::stochastics::NoiseSide;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry in {what} at index {index}")]
    NotFinite { what: &'static str, index: usize },

    #[error("empty spectrum: no singular value above the rank tolerance")]
    EmptySpectrum,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("Jacobi sweeps did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectrum profile must be nonempty")]
    EmptyProfile,

    #[error("estimator needs at least one sample")]
    EmptySampleSet,

    #[error(
        "trace-class assumption violated: per-mode data variance is zero at mode {mode} (1-based)"
    )]
    AssumptionViolated { mode: usize },

    #[error("data coefficient law requires q > 1 (trace-class violated by q = {q})")]
    TraceClassViolated { q: f64 },

    #[error("training noise lives on the wrong side: expected {expected}, got {got}")]
    WrongNoiseSide { expected: NoiseSide, got: NoiseSide },

    #[error("unknown paradigm {name:?}")]
    UnknownParadigm { name: String },

    #[error("no {kind} condition is defined for paradigm {paradigm}")]
    UnknownCondition { paradigm: String, kind: String },

    #[error("search interval does not bracket the objective minimum")]
    NonBracketingInterval,

    #[error("malformed file at byte {offset}: {what}")]
    Parse { offset: u64, what: String },

    #[error("malformed CSV at line {line}: {what}")]
    CsvParse { line: usize, what: String },

    #[error("unsupported file version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
