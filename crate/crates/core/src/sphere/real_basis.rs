//! Expansions in real-valued harmonics.
//!
//! Spin-0 fields use `Y^m_ℓ` with `Σ a_{ℓm} Y_{ℓm} = Σ b^m_ℓ Y^m_ℓ`. The polarization pair
//! `(Q, U)` uses the ℝ²-valued spin-2 harmonics
//!
//! `₂𝐘^m_ℓ = (₂Y_{ℓm} + (−1)^m ₋₂Y_{ℓ,−m}, −i ₂Y_{ℓm} + i(−1)^m ₋₂Y_{ℓ,−m})`,
//! `₋₂𝐘^m_ℓ = (i ₂Y_{ℓm} − i(−1)^m ₋₂Y_{ℓ,−m}, ₂Y_{ℓm} + (−1)^m ₋₂Y_{ℓ,−m})`,
//!
//! which equal `(2 Re ₂Y_{ℓm}, 2 Im ₂Y_{ℓm})` and `(−2 Im ₂Y_{ℓm}, 2 Re ₂Y_{ℓm})`, so that
//! `(Q, U) = Σ ₂a_{ℓm} ₂𝐘^m_ℓ + ₋₂a_{ℓm} ₋₂𝐘^m_ℓ` with `a^{(2)}_{ℓm} = 2(₂a_{ℓm} + i ₋₂a_{ℓm})`.

use super::alm::{AlmSet, Spin2Alm};
use super::spectrum::Component;
use super::transform::{grid_from_points, SphereAnalysis, StokesMap, IMAG_TOL};
use crate::error::{Error, Result};
use crate::special_fn::{complex_to_real_matrix, lm_count, lm_index, spin_harmonic, SphericalPoint};
use num_complex::Complex64;

/// Real coefficients `b^m_ℓ` of a real spin-0 field from complex ones obeying the reality
/// condition.
pub fn complex_to_real_coeffs(a: &[Complex64], ell_max: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; lm_count(ell_max)];
    for ell in 0..=ell_max {
        let u = complex_to_real_matrix(ell);
        let l = ell as i64;
        let scale: f64 = (-l..=l).map(|m| a[lm_index(ell, m)].norm()).sum();
        for m in -l..=l {
            let row = &u[(m + l) as usize];
            let b: Complex64 = (-l..=l).map(|mu| row[(mu + l) as usize].conj() * a[lm_index(ell, mu)]).sum();
            if b.im.abs() > IMAG_TOL * scale.max(1.0) {
                return Err(Error::numerical(format!(
                    "coefficients at ell = {ell} violate the reality condition (residue {:e})",
                    b.im
                )));
            }
            out[lm_index(ell, m)] = b.re;
        }
    }
    Ok(out)
}

/// Inverse of [`complex_to_real_coeffs`].
pub fn real_to_complex_coeffs(b: &[f64], ell_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); lm_count(ell_max)];
    for ell in 0..=ell_max {
        let u = complex_to_real_matrix(ell);
        let l = ell as i64;
        for mu in -l..=l {
            out[lm_index(ell, mu)] =
                (-l..=l).map(|m| u[(m + l) as usize][(mu + l) as usize] * b[lm_index(ell, m)]).sum();
        }
    }
    out
}

/// `(₂𝐘^m_ℓ(p), ₋₂𝐘^m_ℓ(p))`, each a `(Q, U)` pair, evaluated from the defining sums.
pub fn real_spin2_harmonics(ell: usize, m: i64, p: SphericalPoint) -> ([Complex64; 2], [Complex64; 2]) {
    let i = Complex64::i();
    let a = spin_harmonic(2, ell, m, p);
    let s = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let b = s * spin_harmonic(-2, ell, -m, p);
    ([a + b, -i * a + i * b], [i * a - i * b, a + b])
}

/// Coefficients in the real bases: `Θ`, `V` and the spin-0 `E`, `B` in `Y^m_ℓ`, and `(Q, U)` in
/// `₂𝐘^m_ℓ` (`plus2`) and `₋₂𝐘^m_ℓ` (`minus2`).
#[derive(Debug, Clone, PartialEq)]
pub struct RealAlmSet {
    pub ell_max: usize,
    pub theta: Vec<f64>,
    pub e: Vec<f64>,
    pub b: Vec<f64>,
    pub v: Vec<f64>,
    pub plus2: Vec<f64>,
    pub minus2: Vec<f64>,
}

impl RealAlmSet {
    pub fn from_alm(alm: &AlmSet) -> Result<Self> {
        let l = alm.ell_max;
        let conv = |c: Component| complex_to_real_coeffs(&alm.coeffs[c.index()], l);
        let qu = alm.spin2();
        Ok(RealAlmSet {
            ell_max: l,
            theta: conv(Component::Theta)?,
            e: conv(Component::E)?,
            b: conv(Component::B)?,
            v: conv(Component::V)?,
            plus2: qu.plus.iter().map(|z| 0.5 * z.re).collect(),
            minus2: qu.plus.iter().map(|z| 0.5 * z.im).collect(),
        })
    }

    /// Complex coefficients; E and B are taken from the spin-2 coefficients through
    /// `a^{(−2)}_{ℓm} = (−1)^m (a^{(2)}_{ℓ,−m})*`, the image of `Q − iU = (Q + iU)*` under
    /// `₋₂Y_{ℓ,−m} = (−1)^m ₂Y*_{ℓm}`.
    pub fn to_alm(&self) -> AlmSet {
        let l = self.ell_max;
        let n = lm_count(l);
        let plus: Vec<Complex64> = (0..n).map(|k| 2.0 * Complex64::new(self.plus2[k], self.minus2[k])).collect();
        let mut minus = vec![Complex64::new(0.0, 0.0); n];
        for ell in 0..=l {
            for m in -(ell as i64)..=ell as i64 {
                let s = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                minus[lm_index(ell, m)] = s * plus[lm_index(ell, -m)].conj();
            }
        }
        let (e, b) = Spin2Alm { ell_max: l, plus, minus }.to_eb();
        AlmSet {
            ell_max: l,
            coeffs: [real_to_complex_coeffs(&self.theta, l), e, b, real_to_complex_coeffs(&self.v, l)],
        }
    }

    /// Spin-0 coefficients of `(Θ, E, B, V)` at `(ℓ, m)`.
    pub fn spin0(&self, ell: usize, m: i64) -> [f64; 4] {
        let k = lm_index(ell, m);
        [self.theta[k], self.e[k], self.b[k], self.v[k]]
    }
}

/// Real-basis coefficients of a Gauss–Legendre map up to `ell_max`.
pub fn real_basis_expansion(map: &StokesMap, ell_max: usize) -> Result<RealAlmSet> {
    let rule = grid_from_points(&map.points)?;
    let (alm, _) = SphereAnalysis::new(ell_max, rule.n_theta)?.analyze(map)?;
    RealAlmSet::from_alm(&alm)
}
