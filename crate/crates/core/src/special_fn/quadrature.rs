//! Gauss–Legendre × trapezoid product quadrature on the sphere.

use super::point::SphericalPoint;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes in decreasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = z;
        x[n - 1 - i] = -z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Product rule exact for band-limited integrands of total degree `≤ 2·ell_max + 1` in
/// `cos θ` and trigonometric degree `≤ 2·ell_max` in `φ`.
///
/// Nodes are stored ring by ring (`theta` increasing), `phi` increasing within a ring.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub ell_max: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub nodes: Vec<SphericalPoint>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `ell_max + 1` Gauss–Legendre rings and `2·ell_max + 1` longitudes.
    pub fn new(ell_max: usize) -> Self {
        Self::with_rings(ell_max + 1)
    }

    /// Grid with `rings` Gauss–Legendre rings and `2·rings − 1` longitudes,
    /// exact for products of harmonics up to degree `rings − 1`.
    pub fn with_rings(rings: usize) -> Self {
        assert!(rings >= 1, "need at least one ring");
        let (x, w) = gauss_legendre(rings);
        let n_phi = 2 * rings - 1;
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(rings * n_phi);
        let mut weights = Vec::with_capacity(rings * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                nodes.push(SphericalPoint::new(theta, j as f64 * dphi));
                weights.push(wi * dphi);
            }
        }
        QuadratureRule { ell_max: rings - 1, n_theta: rings, n_phi, nodes, weights }
    }

    /// Colatitudes of the rings.
    pub fn ring_thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|i| self.nodes[i * self.n_phi].theta).collect()
    }

    /// `Σ w f(node)`.
    pub fn integrate(&self, f: impl Fn(SphericalPoint) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }
}
