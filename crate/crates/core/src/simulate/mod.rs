//! Monte-Carlo synthesis of isotropic fields on ℝ³ from truncated spectral expansions, and
//! empirical estimators that close the loop against the closed-form correlations.
//!
//! Output is a pure function of the plan: realizations run in parallel, each on its own
//! counter-based substream, and are collected in index order.

pub mod dyadic;
pub mod estimate;
pub mod plan;
pub mod rng;
pub mod scalar;
pub mod vector;

pub use dyadic::simulate_dyadic;
pub use estimate::{covariance_with_jackknife, estimate_correlation, CorrelationEstimate};
pub use plan::{FieldModel, FieldRealization, RealizationMetadata, SimulationPlan, DEFAULT_ELL_MAX};
pub use rng::{with_threads, NormalStream, THREADS_ENV};
pub use scalar::simulate_scalar;
pub use vector::{
    c_coefficients, pair_atoms, psd_factor, simulate_vector, vector_expansion_covariance, VectorCovariance,
};

use crate::error::Result;

/// Dispatches on the plan's field kind.
pub fn simulate(plan: &SimulationPlan) -> Result<FieldRealization> {
    match plan.model {
        FieldModel::Scalar { .. } => simulate_scalar(plan),
        FieldModel::Vector { .. } => simulate_vector(plan),
        FieldModel::Dyadic { .. } => simulate_dyadic(plan),
    }
}
