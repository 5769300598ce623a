//! Stereographic closed form of the spin-weighted harmonics.
//!
//! In the chart `ζ = e^{iφ} cot(θ/2)`,
//!
//! `ₛY_{ℓm}(ζ) = (−1)^{ℓ−m} √((2ℓ+1)(ℓ+m)!(ℓ−m)! / (4π (ℓ−s)!(ℓ+s)!)) (1+ζζ*)^{−ℓ}
//!   Σ_p (−1)^p C(ℓ−s, p) C(ℓ+s, p+s−m) ζ^p (ζ*)^{p+s−m}`.
//!
//! The polynomial overflows for large degrees and is undefined at `ζ = ∞`, so it serves
//! only as an independent cross-check of the recurrence-based evaluation. For `s ≠ 0`
//! the chart's tangent frame differs from the `(e_θ, e_φ)` frame by the rotation
//! `e^{−isφ}` and a factor `(−1)^s`.

use num_complex::Complex64;
use std::f64::consts::PI;

fn factorial(n: i64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Closed-form value at a finite chart point `zeta`.
pub fn zeta_spin_harmonic(spin: i64, ell: usize, m: i64, zeta: Complex64) -> Complex64 {
    let l = ell as i64;
    if m.abs() > l || spin.abs() > l {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if (l - m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let norm = ((2 * l + 1) as f64 * factorial(l + m) * factorial(l - m)
        / (4.0 * PI * factorial(l - spin) * factorial(l + spin)))
    .sqrt();
    let rho = 1.0 + zeta.norm_sqr();
    let mut sum = Complex64::new(0.0, 0.0);
    let p_lo = 0.max(m - spin);
    let p_hi = l - spin;
    for p in p_lo..=p_hi {
        let q = p + spin - m;
        if q < 0 {
            continue;
        }
        let c = binomial(l - spin, p) * binomial(l + spin, q);
        let alt = if p % 2 == 0 { 1.0 } else { -1.0 };
        sum += alt * c * zeta.powi(p as i32) * zeta.conj().powi(q as i32);
    }
    sign * norm * rho.powi(-(l as i32)) * sum
}
