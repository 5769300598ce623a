//! Dyadic tensor fields `C_ij(x) = μ δ_ij + s a_i(x) b_j(x)`, `i, j ∈ {1, 2}`, with `a`, `b`
//! independent centred Gaussian vector fields restricted to their first two components.

use super::plan::{FieldModel, FieldRealization, SimulationPlan};
use super::rng::NormalStream;
use super::vector::VectorSampler;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Realizations of a dyadic plan, stored per point as `(C₁₁, C₁₂, C₂₁, C₂₂)`.
///
/// Within realization `r`, the coefficients of `a` are drawn before those of `b` from
/// stream `r` of the master seed.
pub fn simulate_dyadic(plan: &SimulationPlan) -> Result<FieldRealization> {
    plan.validate()?;
    let FieldModel::Dyadic { mu, s, a, b } = &plan.model else {
        return Err(Error::invalid(format!("plan kind is {}, expected dyadic", plan.model.kind())));
    };
    let sa = VectorSampler::new(a, plan.ell_max, &plan.points)?;
    let sb = VectorSampler::new(b, plan.ell_max, &plan.points)?;
    let (mu, s) = (*mu, *s);
    let blocks: Vec<Vec<f64>> = (0..plan.realizations)
        .into_par_iter()
        .map(|r| {
            let mut stream = NormalStream::new(plan.master_seed, r as u64);
            let va = sa.sample(&mut stream);
            let vb = sb.sample(&mut stream);
            va.iter()
                .zip(&vb)
                .flat_map(|(x, y)| [mu + s * x[0] * y[0], s * x[0] * y[1], s * x[1] * y[0], mu + s * x[1] * y[1]])
                .collect()
        })
        .collect();
    FieldRealization::from_blocks(plan, blocks)
}
