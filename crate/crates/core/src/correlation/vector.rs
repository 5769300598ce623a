//! Two-point correlation tensor of an isotropic vector field on ℝ³.
//!
//! The barycentric form is
//! `∫ [j₀/3 δ + (1/√6) j₂ Σ_m G^m θ_{m0}] dΦ₁ + ∫ [j₀/3 δ − √(2/3) j₂ Σ_m G^m θ_{m0}] dΦ₂`
//! with `G^m` the Cartesian coupling matrices of degree two. The Yaglom form builds the
//! same tensor from longitudinal and transverse functions.

use super::cartesian::{delta, norm3, quadrupole_sum, Mat3};
use super::measure::{Normalization, VectorSpectralPair};
use crate::error::{Error, Result};
use crate::special_fn::spherical_bessel_array;

/// `j₁(u)/u`, with its limit `1/3` at the origin.
fn j1_over_u(u: f64) -> f64 {
    if u < 1e-4 {
        let u2 = u * u;
        return 1.0 / 3.0 - u2 / 30.0 + u2 * u2 / 840.0;
    }
    spherical_bessel_array(1, u)[1] / u
}

/// Correlation tensor `⟨T_i(x), T_j(x + r)⟩` from the coupling-coefficient route.
pub fn vector_corr(r: [f64; 3], pair: &VectorSpectralPair) -> Result<Mat3> {
    let pair = pair.to_barycentric()?;
    let dist = norm3(r);
    let mut out = [[0.0; 3]; 3];
    let mut a0 = 0.0;
    let mut a2 = 0.0;
    for (phi, c2) in [(&pair.phi1, 1.0 / 6f64.sqrt()), (&pair.phi2, -(2.0f64 / 3.0).sqrt())] {
        for atom in phi.atoms() {
            let j = spherical_bessel_array(2, atom.lambda * dist);
            a0 += atom.mass * j[0] / 3.0;
            a2 += atom.mass * c2 * j[2];
        }
    }
    let q = if dist > 0.0 { quadrupole_sum(r) } else { [[0.0; 3]; 3] };
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = a0 * delta(a, b) + a2 * q[a][b];
        }
    }
    Ok(out)
}

/// Longitudinal and transverse functions `(B_ll, B_kk)` of a Yaglom-normalised pair on ℝ³:
/// `B_ll = ∫(j₁/u − j₂) dΦ₁ + 2∫ j₁/u dΦ₂`, `B_kk = ∫ j₁/u dΦ₁ + ∫(j₀ − j₁/u) dΦ₂`.
pub fn yaglom_longitudinal_transverse(r: f64, pair: &VectorSpectralPair) -> Result<(f64, f64)> {
    if pair.normalization != Normalization::Yaglom {
        return Err(Error::invalid("pair must use the Yaglom normalization"));
    }
    let mut bll = 0.0;
    let mut bkk = 0.0;
    for a in pair.phi1.atoms() {
        let u = a.lambda * r;
        let j = spherical_bessel_array(2, u);
        bll += a.mass * (j1_over_u(u) - j[2]);
        bkk += a.mass * j1_over_u(u);
    }
    for a in pair.phi2.atoms() {
        let u = a.lambda * r;
        let j0 = spherical_bessel_array(0, u)[0];
        bll += 2.0 * a.mass * j1_over_u(u);
        bkk += a.mass * (j0 - j1_over_u(u));
    }
    Ok((bll, bkk))
}

/// `[B_ll − B_kk] r_i r_j / r² + B_kk δ_ij` with the Yaglom spectral forms.
pub fn vector_corr_yaglom(r: [f64; 3], pair: &VectorSpectralPair) -> Result<Mat3> {
    let pair = pair.to_yaglom()?;
    let dist = norm3(r);
    let (bll, bkk) = yaglom_longitudinal_transverse(dist, &pair)?;
    let mut out = [[0.0; 3]; 3];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let rr = if dist > 0.0 { r[a] * r[b] / (dist * dist) } else { 0.0 };
            *v = (bll - bkk) * rr + bkk * delta(a, b);
        }
    }
    Ok(out)
}

/// Normalised longitudinal and lateral correlations `(f, g)` at distance `r`, reading the
/// kernel along the first axis.
pub fn longitudinal_lateral(kernel: impl Fn([f64; 3]) -> Result<Mat3>, r: f64) -> Result<(f64, f64)> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::invalid(format!("distance must be finite and non-negative, got {r}")));
    }
    let k0 = kernel([0.0; 3])?;
    let (v_long, v_lat) = (k0[0][0], k0[1][1]);
    if !(v_long > 0.0 && v_lat > 0.0) {
        return Err(Error::numerical("degenerate field: zero variance"));
    }
    let k = kernel([r, 0.0, 0.0])?;
    Ok((k[0][0] / v_long, k[1][1] / v_lat))
}
