//! Data-driven spectral regularization of linear ill-posed inverse problems.
//!
//! The crate decomposes a discretized forward operator into its singular
//! system, models noise and data distributions diagonally in that basis,
//! fits spectral filters under several learning paradigms (supervised,
//! plug-and-play, post-processing, adversarial with gradient penalty or
//! source condition), and provides closed-form error diagnostics with
//! independent numerical oracles.
//!
//! Paradigms are runtime-selectable through a name-indexed strategy
//! registry; see [`filters::StrategyRegistry`].

pub mod diagnostics;
pub mod error;
pub mod filters;
pub mod matrix;
pub mod operators;
pub mod rng;
pub mod stochastics;
pub mod svd;
pub mod system;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use svd::compute_svd;
pub use system::{apply_forward, project_row_space, SingularSystem};
