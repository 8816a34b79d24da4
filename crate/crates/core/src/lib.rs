//! Accuracy versus sensitivity analysis for binary classifiers of a scalar
//! observation.
//!
//! A [`HypothesisPair`] holds two parametric densities and their priors. A
//! classifier partitions the real line with ordered boundary points
//! ([`BoundarySet`]); its accuracy is the prior-weighted probability of a
//! correct decision and its sensitivity is a norm of the accuracy gradient
//! with respect to the stacked density parameters, boundaries held fixed.
//!
//! The modules build on each other:
//!
//! - [`densities`]: Gaussian, exponential and user-registered families.
//! - [`classifier`]: accuracy, parameter gradients and sensitivity.
//! - [`boundary_solver`]: likelihood-ratio boundaries and the best single threshold.
//! - [`theory_checks`]: numerical checks of the conditions under which the
//!   maximum-accuracy classifier has a nonzero sensitivity gradient.
//! - [`tradeoff`]: accuracy/sensitivity frontier curves.
//! - [`param_designer`]: parameter design for minimum sensitivity at fixed accuracy.
//! - [`adversary_sim`]: seeded Monte Carlo runs against shifted distributions.

pub mod adversary_sim;
pub mod boundary_solver;
pub mod classifier;
pub mod densities;
mod error;
pub mod numeric;
pub mod param_designer;
pub mod presets;
pub mod theory_checks;
pub mod tradeoff;

pub use classifier::{BoundarySet, ClassifierSpec, Norm, Orientation};
pub use densities::{DensityModel, Hypothesis, HypothesisPair};
pub use error::{Error, Result};
