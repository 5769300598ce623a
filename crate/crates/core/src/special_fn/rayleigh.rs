//! Plane-wave (Rayleigh) expansion in three dimensions.

use super::bessel::spherical_bessel_array;
use super::harmonics::{lm_index, real_harmonics_all};
use super::point::SphericalPoint;
use num_complex::Complex64;
use std::f64::consts::PI;

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `4π Σ_{ℓ ≤ ell_max} i^ℓ j_ℓ(|k||r|) Σ_m Y^m_ℓ(r̂) Y^m_ℓ(k̂)`, the truncated
/// expansion of `exp(i k·r)`.
pub fn rayleigh_partial_sum(k: [f64; 3], r: [f64; 3], ell_max: usize) -> Complex64 {
    let kn = norm3(k);
    let rn = norm3(r);
    let jl = spherical_bessel_array(ell_max, kn * rn);
    let yr = real_harmonics_all(ell_max, SphericalPoint::from_cartesian(r));
    let yk = real_harmonics_all(ell_max, SphericalPoint::from_cartesian(k));
    let mut total = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::new(1.0, 0.0);
    for ell in 0..=ell_max {
        let li = ell as i64;
        let s: f64 = (-li..=li).map(|m| yr[lm_index(ell, m)] * yk[lm_index(ell, m)]).sum();
        total += phase * (4.0 * PI * jl[ell] * s);
        phase *= Complex64::new(0.0, 1.0);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_frequency() {
        let v = rayleigh_partial_sum([0.0; 3], [0.3, -1.0, 2.0], 0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn converges_to_plane_wave() {
        let k = [0.6, -1.1, 0.4];
        let r = [1.2, 0.9, -2.0];
        let dot: f64 = (0..3).map(|i| k[i] * r[i]).sum();
        let v = rayleigh_partial_sum(k, r, 30);
        assert!((v - Complex64::from_polar(1.0, dot)).norm() < 1e-12);
    }
}
