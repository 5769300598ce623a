//! Truncated spectral synthesis of isotropic scalar fields on ℝ³:
//! `T(x) = 2√π Σ_k Σ_{ℓ ≤ L} Σ_m Y^m_ℓ(x̂) j_ℓ(λ_k |x|) Z^m_ℓ(λ_k)` with independent
//! `Z^m_ℓ(λ_k) ~ N(0, Φ({λ_k}))`.

use super::plan::{FieldModel, FieldRealization, SimulationPlan};
use super::rng::NormalStream;
use crate::correlation::cartesian::norm3;
use crate::correlation::SpectralMeasure;
use crate::error::{Error, Result};
use crate::special_fn::{lm_count, real_harmonics_all, spherical_bessel_array, SphericalPoint};
use rayon::prelude::*;
use std::f64::consts::PI;

/// `Y^m_ℓ(x̂) j_ℓ(λ|x|)` for all `(ℓ, m)` with `ℓ ≤ ell_max`, scaled by `scale`.
pub(crate) fn radial_harmonic_basis(x: [f64; 3], lambda: f64, ell_max: usize, scale: f64) -> Vec<f64> {
    let r = norm3(x);
    let p = SphericalPoint::from_cartesian(x);
    let y = real_harmonics_all(ell_max, p);
    let j = spherical_bessel_array(ell_max, lambda * r);
    let mut out = vec![0.0; lm_count(ell_max)];
    let mut idx = 0;
    for (l, jl) in j.iter().enumerate() {
        for _ in 0..(2 * l + 1) {
            out[idx] = scale * y[idx] * jl;
            idx += 1;
        }
    }
    out
}

/// Precomputed basis values for repeated sampling at fixed points.
pub struct ScalarSampler {
    ell_max: usize,
    sd: Vec<f64>,
    /// `basis[point][atom]`.
    basis: Vec<Vec<Vec<f64>>>,
}

impl ScalarSampler {
    pub fn new(spectrum: &SpectralMeasure, ell_max: usize, points: &[[f64; 3]]) -> Self {
        let scale = 2.0 * PI.sqrt();
        let basis = points
            .iter()
            .map(|&x| spectrum.atoms().iter().map(|a| radial_harmonic_basis(x, a.lambda, ell_max, scale)).collect())
            .collect();
        ScalarSampler { ell_max, sd: spectrum.atoms().iter().map(|a| a.mass.sqrt()).collect(), basis }
    }

    /// One realization at every point.
    pub fn sample(&self, stream: &mut NormalStream) -> Vec<f64> {
        let n = lm_count(self.ell_max);
        let mut z = vec![0.0; n * self.sd.len()];
        for (k, sd) in self.sd.iter().enumerate() {
            let block = &mut z[k * n..(k + 1) * n];
            stream.fill(block);
            block.iter_mut().for_each(|v| *v *= sd);
        }
        self.basis
            .iter()
            .map(|per_atom| {
                per_atom
                    .iter()
                    .enumerate()
                    .map(|(k, b)| b.iter().zip(&z[k * n..(k + 1) * n]).map(|(u, v)| u * v).sum::<f64>())
                    .sum()
            })
            .collect()
    }
}

/// Realizations of a scalar plan; realization `r` uses stream `r` of the master seed.
pub fn simulate_scalar(plan: &SimulationPlan) -> Result<FieldRealization> {
    plan.validate()?;
    let FieldModel::Scalar { spectrum } = &plan.model else {
        return Err(Error::invalid(format!("plan kind is {}, expected scalar", plan.model.kind())));
    };
    let sampler = ScalarSampler::new(spectrum, plan.ell_max, &plan.points);
    let blocks: Vec<Vec<f64>> = (0..plan.realizations)
        .into_par_iter()
        .map(|r| sampler.sample(&mut NormalStream::new(plan.master_seed, r as u64)))
        .collect();
    FieldRealization::from_blocks(plan, blocks)
}
