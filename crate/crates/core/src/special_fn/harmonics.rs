//! Complex, real and spin-weighted spherical harmonics.
//!
//! All harmonics are orthonormal with respect to `sin θ dθ dφ` and carry the
//! Condon–Shortley phase. Spin-0 values come from normalised associated-Legendre
//! recurrences; spin-weighted values from Wigner small-d columns:
//!
//! `ₛY_{ℓm}(θ, φ) = (−1)^s √((2ℓ+1)/4π) d^ℓ_{m,−s}(θ) e^{imφ}`.
//!
//! Real harmonics follow
//! `Y^m_ℓ = (Y_{ℓm} + (−1)^m Y_{ℓ,−m})/√2` for `m > 0`, `Y^0_ℓ = Y_{ℓ0}` and
//! `Y^m_ℓ = (Y_{ℓm} − (−1)^m Y_{ℓ,−m})/(√2 i)` for `m < 0`.

use super::point::SphericalPoint;
use super::wigner::{wigner_small_d, wigner_small_d_column};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// Degree, order and spin weight of a harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub ell: usize,
    pub m: i64,
    pub spin: i64,
}

impl HarmonicIndex {
    pub fn new(ell: usize, m: i64, spin: i64) -> Self {
        HarmonicIndex { ell, m, spin }
    }

    /// `|m| ≤ ℓ` and `|s| ≤ ℓ`; otherwise the harmonic vanishes identically.
    pub fn is_admissible(&self) -> bool {
        self.m.unsigned_abs() as usize <= self.ell && self.spin.unsigned_abs() as usize <= self.ell
    }
}

/// Flat position of `(ℓ, m)` in arrays holding all orders of all degrees up to some bound.
#[inline]
pub fn lm_index(ell: usize, m: i64) -> usize {
    ((ell * ell + ell) as i64 + m) as usize
}

/// Number of `(ℓ, m)` pairs with `ℓ ≤ ell_max`.
#[inline]
pub fn lm_count(ell_max: usize) -> usize {
    (ell_max + 1) * (ell_max + 1)
}

#[inline]
fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Normalised associated Legendre values `Ȳ_{ℓm}(θ) = Y_{ℓm}(θ, 0)` for `m ≥ 0`,
/// packed at `ℓ(ℓ+1)/2 + m`.
pub fn legendre_table(ell_max: usize, theta: f64) -> Vec<f64> {
    let (st, ct) = theta.sin_cos();
    let n = (ell_max + 1) * (ell_max + 2) / 2;
    let mut out = vec![0.0; n];
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut ymm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=ell_max {
        if m > 0 {
            ymm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * st;
        }
        out[idx(m, m)] = ymm;
        if m < ell_max {
            out[idx(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * ct * ymm;
        }
        for l in (m + 2)..=ell_max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            out[idx(l, m)] = a * (ct * out[idx(l - 1, m)] - b * out[idx(l - 2, m)]);
        }
    }
    out
}

/// Complex harmonic `Y_{ℓm}(θ, φ)`.
pub fn complex_harmonic(ell: usize, m: i64, p: SphericalPoint) -> Complex64 {
    if m.unsigned_abs() as usize > ell {
        return Complex64::new(0.0, 0.0);
    }
    let ma = m.unsigned_abs() as usize;
    let tab = legendre_table(ell, p.theta);
    let ybar = tab[ell * (ell + 1) / 2 + ma];
    let v = Complex64::from_polar(ybar, ma as f64 * p.phi);
    if m < 0 {
        parity_sign(m) * v.conj()
    } else {
        v
    }
}

/// All complex harmonics `Y_{ℓm}` for `ℓ ≤ ell_max`, indexed by [`lm_index`].
pub fn complex_harmonics_all(ell_max: usize, p: SphericalPoint) -> Vec<Complex64> {
    let tab = legendre_table(ell_max, p.theta);
    let mut out = vec![Complex64::new(0.0, 0.0); lm_count(ell_max)];
    for ell in 0..=ell_max {
        for ma in 0..=ell {
            let v = Complex64::from_polar(tab[ell * (ell + 1) / 2 + ma], ma as f64 * p.phi);
            out[lm_index(ell, ma as i64)] = v;
            if ma > 0 {
                out[lm_index(ell, -(ma as i64))] = parity_sign(ma as i64) * v.conj();
            }
        }
    }
    out
}

/// Real harmonic `Y^m_ℓ(θ, φ)`.
pub fn real_harmonic(ell: usize, m: i64, p: SphericalPoint) -> f64 {
    if m.unsigned_abs() as usize > ell {
        return 0.0;
    }
    let ma = m.unsigned_abs() as usize;
    let tab = legendre_table(ell, p.theta);
    real_from_legendre(tab[ell * (ell + 1) / 2 + ma], m, p.phi)
}

#[inline]
fn real_from_legendre(ybar: f64, m: i64, phi: f64) -> f64 {
    match m.signum() {
        0 => ybar,
        1 => SQRT_2 * ybar * (m as f64 * phi).cos(),
        _ => -parity_sign(m) * SQRT_2 * ybar * ((-m) as f64 * phi).sin(),
    }
}

/// All real harmonics `Y^m_ℓ` for `ℓ ≤ ell_max`, indexed by [`lm_index`].
pub fn real_harmonics_all(ell_max: usize, p: SphericalPoint) -> Vec<f64> {
    let tab = legendre_table(ell_max, p.theta);
    let mut out = vec![0.0; lm_count(ell_max)];
    for ell in 0..=ell_max {
        let li = ell as i64;
        for m in -li..=li {
            out[lm_index(ell, m)] = real_from_legendre(tab[ell * (ell + 1) / 2 + m.unsigned_abs() as usize], m, p.phi);
        }
    }
    out
}

/// Spin-weighted harmonic `ₛY_{ℓm}(θ, φ)`; zero when `|s| > ℓ` or `|m| > ℓ`.
pub fn spin_harmonic(spin: i64, ell: usize, m: i64, p: SphericalPoint) -> Complex64 {
    let idx = HarmonicIndex::new(ell, m, spin);
    if !idx.is_admissible() {
        return Complex64::new(0.0, 0.0);
    }
    if spin == 0 {
        return complex_harmonic(ell, m, p);
    }
    let norm = parity_sign(spin) * ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt();
    Complex64::from_polar(norm * wigner_small_d(ell, m, -spin, p.theta), m as f64 * p.phi)
}

/// All spin-`s` harmonics for `ℓ ≤ ell_max`, indexed by [`lm_index`]; entries with
/// `ℓ < |s|` are zero.
pub fn spin_harmonics_all(spin: i64, ell_max: usize, p: SphericalPoint) -> Vec<Complex64> {
    if spin == 0 {
        return complex_harmonics_all(ell_max, p);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); lm_count(ell_max)];
    let sa = spin.unsigned_abs() as usize;
    if sa > ell_max {
        return out;
    }
    let em = ell_max as i64;
    for m in -em..=em {
        let col = wigner_small_d_column(ell_max, m, -spin, p.theta);
        let start = (m.unsigned_abs() as usize).max(sa);
        let phase = Complex64::from_polar(parity_sign(spin), m as f64 * p.phi);
        for (i, d) in col.iter().enumerate() {
            let ell = start + i;
            let norm = ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt();
            out[lm_index(ell, m)] = phase * (norm * d);
        }
    }
    out
}

/// Wigner entry `D^{(ℓ)}_{m0}` on the coset of the rotation carrying the north pole to `p`:
/// `e^{−imφ} d^ℓ_{m0}(θ) = √(4π/(2ℓ+1)) Y*_{ℓm}(θ, φ)`.
#[allow(non_snake_case)]
pub fn wigner_D_m0(ell: usize, m: i64, p: SphericalPoint) -> Complex64 {
    if m.unsigned_abs() as usize > ell {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(wigner_small_d(ell, m, 0, p.theta), -(m as f64) * p.phi)
}

/// Matrix entry `θ^{U_ℓ}_{m0}` of the real irreducible representation of degree `ℓ`:
/// `2√π/√(2ℓ+1) · Y^m_ℓ(θ, φ)`.
pub fn real_rotation_m0(ell: usize, m: i64, p: SphericalPoint) -> f64 {
    2.0 * PI.sqrt() / ((2 * ell + 1) as f64).sqrt() * real_harmonic(ell, m, p)
}

/// Change-of-basis matrix `U` with `Y^m_ℓ = Σ_μ U_{mμ} Y_{ℓμ}`; row/column `k`
/// corresponds to order `k − ℓ`. Unitary.
pub fn complex_to_real_matrix(ell: usize) -> Vec<Vec<Complex64>> {
    let n = 2 * ell + 1;
    let li = ell as i64;
    let mut u = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let at = |m: i64| (m + li) as usize;
    let h = FRAC_1_SQRT_2;
    for m in -li..=li {
        let s = parity_sign(m);
        match m.signum() {
            0 => u[at(0)][at(0)] = Complex64::new(1.0, 0.0),
            1 => {
                u[at(m)][at(m)] = Complex64::new(h, 0.0);
                u[at(m)][at(-m)] = Complex64::new(s * h, 0.0);
            }
            _ => {
                // 1/(√2 i) = −i/√2
                u[at(m)][at(m)] = Complex64::new(0.0, -h);
                u[at(m)][at(-m)] = Complex64::new(0.0, s * h);
            }
        }
    }
    u
}
