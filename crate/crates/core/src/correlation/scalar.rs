//! Correlation function of an isotropic scalar field.

use super::measure::SpectralMeasure;
use crate::error::{Error, Result};
use crate::special_fn::schoenberg_kernel;

/// `Σ_k mass_k · 2^{(d−2)/2} Γ(d/2) J_{(d−2)/2}(λ_k r)/(λ_k r)^{(d−2)/2}` on ℝᵈ.
pub fn scalar_corr(r: f64, phi: &SpectralMeasure, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::invalid(format!("separation must be finite and non-negative, got {r}")));
    }
    Ok(phi.integrate(|lambda| schoenberg_kernel(d, lambda * r)))
}
