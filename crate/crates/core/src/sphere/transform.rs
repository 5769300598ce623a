//! Synthesis of Stokes maps from coefficients and exact analysis on Gauss–Legendre grids.
//!
//! `Θ = Σ a^Θ_{ℓm} Y_{ℓm}`, `V = Σ a^V_{ℓm} Y_{ℓm}` and
//! `Q ± iU = Σ a^{(±2)}_{ℓm} ₊₂Y_{ℓm}` / `₋₂Y_{ℓm}` with `a^{(±2)} = a^E ± i a^B`.

use super::alm::{AlmSet, Spin2Alm};
use super::spectrum::Component;
use crate::error::{Error, Result};
use crate::special_fn::{complex_harmonics_all, lm_count, spin_harmonics_all, QuadratureRule, SphericalPoint};
use num_complex::Complex64;
use rayon::prelude::*;

/// Relative bound on imaginary parts dropped from synthesized real fields.
pub const IMAG_TOL: f64 = 1e-10;
/// Tolerance when matching map nodes against a Gauss–Legendre grid.
pub const GRID_TOL: f64 = 1e-9;

/// Values `(Θ, Q, U, V)` at a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesMap {
    pub points: Vec<SphericalPoint>,
    pub values: Vec<[f64; 4]>,
}

impl StokesMap {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss–Legendre grid with `rings` rings and `2·rings − 1` longitudes.
pub fn gl_grid(rings: usize) -> Result<QuadratureRule> {
    if rings == 0 {
        return Err(Error::invalid("grid needs at least one ring"));
    }
    Ok(QuadratureRule::with_rings(rings))
}

/// Recognizes a Gauss–Legendre grid from its nodes.
pub fn grid_from_points(points: &[SphericalPoint]) -> Result<QuadratureRule> {
    let n = points.len() as f64;
    let r = ((1.0 + (1.0 + 8.0 * n).sqrt()) / 4.0).round() as usize;
    if r == 0 || r * (2 * r - 1) != points.len() {
        return Err(Error::invalid(format!("{} points do not form a Gauss-Legendre grid", points.len())));
    }
    let rule = QuadratureRule::with_rings(r);
    for (k, (p, q)) in points.iter().zip(&rule.nodes).enumerate() {
        let dphi = (p.phi - q.phi).abs();
        let dphi = dphi.min(std::f64::consts::TAU - dphi);
        if (p.theta - q.theta).abs() > GRID_TOL || dphi > GRID_TOL {
            return Err(Error::invalid(format!("point {k} is not on the {r}-ring Gauss-Legendre grid")));
        }
    }
    Ok(rule)
}

/// Harmonic values `Y_{ℓm}`, `₂Y_{ℓm}`, `₋₂Y_{ℓm}` cached at fixed points.
pub struct HarmonicTables {
    pub ell_max: usize,
    pub points: Vec<SphericalPoint>,
    y: Vec<Vec<Complex64>>,
    y_plus: Vec<Vec<Complex64>>,
    y_minus: Vec<Vec<Complex64>>,
}

fn real_part_checked(z: Complex64, scale: f64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(Error::numerical(format!("{what} has imaginary residue {:e}", z.im)));
    }
    Ok(z.re)
}

impl HarmonicTables {
    pub fn new(ell_max: usize, points: &[SphericalPoint]) -> Self {
        let rows: Vec<_> = points
            .par_iter()
            .map(|&p| {
                (
                    complex_harmonics_all(ell_max, p),
                    spin_harmonics_all(2, ell_max, p),
                    spin_harmonics_all(-2, ell_max, p),
                )
            })
            .collect();
        let mut t = HarmonicTables {
            ell_max,
            points: points.to_vec(),
            y: Vec::with_capacity(points.len()),
            y_plus: Vec::with_capacity(points.len()),
            y_minus: Vec::with_capacity(points.len()),
        };
        for (a, b, c) in rows {
            t.y.push(a);
            t.y_plus.push(b);
            t.y_minus.push(c);
        }
        t
    }

    /// Real `(Θ, Q, U, V)` at the cached points; coefficients above `ell_max` are ignored.
    pub fn synthesize(&self, alm: &AlmSet) -> Result<StokesMap> {
        let n = lm_count(self.ell_max.min(alm.ell_max));
        let qu = alm.spin2();
        let th = &alm.coeffs[Component::Theta.index()][..n];
        let v = &alm.coeffs[Component::V.index()][..n];
        let values = (0..self.points.len())
            .into_par_iter()
            .map(|p| {
                let dot = |a: &[Complex64], y: &[Complex64]| -> (Complex64, f64) {
                    a.iter()
                        .zip(y)
                        .fold((Complex64::new(0.0, 0.0), 0.0), |(s, m), (a, y)| (s + a * y, m + a.norm() * y.norm()))
                };
                let (t, ts) = dot(th, &self.y[p]);
                let (vv, vs) = dot(v, &self.y[p]);
                let (pp, ps) = dot(&qu.plus[..n], &self.y_plus[p]);
                let (pm, ms) = dot(&qu.minus[..n], &self.y_minus[p]);
                let i = Complex64::i();
                let q = 0.5 * (pp + pm);
                let u = -0.5 * i * (pp - pm);
                Ok([
                    real_part_checked(t, ts, "Theta")?,
                    real_part_checked(q, ps + ms, "Q")?,
                    real_part_checked(u, ps + ms, "U")?,
                    real_part_checked(vv, vs, "V")?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StokesMap { points: self.points.clone(), values })
    }
}

/// Synthesizes `(Θ, Q, U, V)` at arbitrary points.
pub fn alm_to_stokes(alm: &AlmSet, points: &[SphericalPoint]) -> Result<StokesMap> {
    HarmonicTables::new(alm.ell_max, points).synthesize(alm)
}

/// Exact analysis of band-limited maps on one Gauss–Legendre grid.
pub struct SphereAnalysis {
    pub rule: QuadratureRule,
    tables: HarmonicTables,
}

impl SphereAnalysis {
    /// Requires `ell_max < rings`, which makes the rule exact for all products of
    /// harmonics of degree `≤ ell_max`.
    pub fn new(ell_max: usize, rings: usize) -> Result<Self> {
        let rule = gl_grid(rings)?;
        if ell_max >= rings {
            return Err(Error::invalid(format!("ell_max {ell_max} needs more than {rings} rings for exact analysis")));
        }
        let tables = HarmonicTables::new(ell_max, &rule.nodes);
        Ok(SphereAnalysis { rule, tables })
    }

    /// Coefficients of the spin-0 fields and of `Q ± iU`.
    ///
    /// Ring partial sums are accumulated independently and added in ring order.
    pub fn analyze(&self, map: &StokesMap) -> Result<(AlmSet, Spin2Alm)> {
        if map.points.len() != self.rule.nodes.len() {
            return Err(Error::invalid("map does not match the analysis grid"));
        }
        let ell_max = self.tables.ell_max;
        let n = lm_count(ell_max);
        let n_phi = self.rule.n_phi;
        let zero = Complex64::new(0.0, 0.0);
        let partials: Vec<[Vec<Complex64>; 4]> = (0..self.rule.n_theta)
            .into_par_iter()
            .map(|ring| {
                let mut acc: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![zero; n]);
                for p in ring * n_phi..(ring + 1) * n_phi {
                    let w = self.rule.weights[p];
                    let [t, q, u, v] = map.values[p];
                    let plus = Complex64::new(q, u) * w;
                    let minus = Complex64::new(q, -u) * w;
                    for k in 0..n {
                        let y = self.tables.y[p][k].conj();
                        acc[0][k] += y * (w * t);
                        acc[3][k] += y * (w * v);
                        acc[1][k] += plus * self.tables.y_plus[p][k].conj();
                        acc[2][k] += minus * self.tables.y_minus[p][k].conj();
                    }
                }
                acc
            })
            .collect();
        let mut sums: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![zero; n]);
        for part in partials {
            for (s, a) in sums.iter_mut().zip(part) {
                for (x, y) in s.iter_mut().zip(a) {
                    *x += y;
                }
            }
        }
        let [t, plus, minus, v] = sums;
        let spin2 = Spin2Alm { ell_max, plus, minus };
        let (e, b) = spin2.to_eb();
        Ok((AlmSet { ell_max, coeffs: [t, e, b, v] }, spin2))
    }
}

/// Coefficients up to `ell_max` of a map sampled on a Gauss–Legendre grid.
///
/// Maps that are not band-limited to `ell_max` alias into the returned coefficients.
pub fn stokes_to_alm(map: &StokesMap, ell_max: usize) -> Result<AlmSet> {
    let rule = grid_from_points(&map.points)?;
    Ok(SphereAnalysis::new(ell_max, rule.n_theta)?.analyze(map)?.0)
}

/// Spin-`±2` projections `a^{(±2)}_{ℓm} = ∫ (Q ± iU) ₊₂Y*_{ℓm}` / `₋₂Y*_{ℓm}`.
pub fn spin2_projections(map: &StokesMap, ell_max: usize) -> Result<Spin2Alm> {
    let rule = grid_from_points(&map.points)?;
    Ok(SphereAnalysis::new(ell_max, rule.n_theta)?.analyze(map)?.1)
}
