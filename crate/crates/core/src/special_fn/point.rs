//! Points on the unit sphere in colatitude/longitude and in the stereographic chart.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// A point of S² given by colatitude `theta ∈ [0, π]` and longitude `phi ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// Builds a point, wrapping `phi` into `[0, 2π)`.
    ///
    /// # Panics
    /// If `theta` lies outside `[0, π]` or either angle is not finite.
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(theta.is_finite() && phi.is_finite(), "angles must be finite");
        assert!((0.0..=PI).contains(&theta), "colatitude {theta} outside [0, pi]");
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        SphericalPoint { theta, phi }
    }

    /// Direction of a non-zero vector; the zero vector maps to the north pole.
    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let rho = v[0].hypot(v[1]);
        let theta = rho.atan2(v[2]);
        let phi = if rho == 0.0 { 0.0 } else { v[1].atan2(v[0]) };
        SphericalPoint::new(theta, phi)
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The antipodal point `−n`.
    pub fn antipode(&self) -> Self {
        SphericalPoint::new(PI - self.theta, self.phi + PI)
    }

    /// Stereographic coordinate `ζ = e^{iφ} cot(θ/2)`; `None` is the point at infinity
    /// (the north pole).
    pub fn zeta(&self) -> Option<Complex64> {
        if self.theta == 0.0 {
            return None;
        }
        let c = (0.5 * self.theta).cos() / (0.5 * self.theta).sin();
        Some(Complex64::from_polar(c, self.phi))
    }

    /// Inverse of [`SphericalPoint::zeta`], via
    /// `x = (ζ+ζ*)/(|ζ|²+1)`, `y = (ζ−ζ*)/(i(|ζ|²+1))`, `z = (|ζ|²−1)/(|ζ|²+1)`.
    pub fn from_zeta(zeta: Option<Complex64>) -> Self {
        match zeta {
            None => SphericalPoint::new(0.0, 0.0),
            Some(z) => {
                let n = z.norm_sqr();
                let x = 2.0 * z.re / (n + 1.0);
                let y = 2.0 * z.im / (n + 1.0);
                let zz = (n - 1.0) / (n + 1.0);
                SphericalPoint::from_cartesian([x, y, zz])
            }
        }
    }
}
