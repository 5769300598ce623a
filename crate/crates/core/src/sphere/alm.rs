//! Harmonic coefficients of the spin-0 components and their random synthesis.

use super::spectrum::{AngularPowerSpectrum, Component};
use crate::error::{Error, Result};
use crate::simulate::{psd_factor, NormalStream};
use crate::special_fn::{eth_power, lm_count, lm_index, EthDirection};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[inline]
fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficients `a^X_{ℓm}` for `X ∈ {Θ, E, B, V}`, each indexed by `lm_index(ℓ, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmSet {
    pub ell_max: usize,
    pub coeffs: [Vec<Complex64>; 4],
}

impl AlmSet {
    pub fn zeros(ell_max: usize) -> Self {
        let n = lm_count(ell_max);
        AlmSet { ell_max, coeffs: std::array::from_fn(|_| vec![ZERO; n]) }
    }

    pub fn get(&self, c: Component, ell: usize, m: i64) -> Complex64 {
        self.coeffs[c.index()][lm_index(ell, m)]
    }

    pub fn set(&mut self, c: Component, ell: usize, m: i64, v: Complex64) {
        self.coeffs[c.index()][lm_index(ell, m)] = v;
    }

    /// Largest `|a_{ℓ,−m} − (−1)^m a*_{ℓm}|` over all components.
    pub fn reality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.coeffs {
            for ell in 0..=self.ell_max {
                for m in 0..=ell as i64 {
                    let d = a[lm_index(ell, -m)] - a[lm_index(ell, m)].conj() * sign(m);
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }

    /// Largest absolute coefficient difference; degrees beyond one set's range count as zero.
    pub fn max_abs_diff(&self, other: &AlmSet) -> f64 {
        let l = self.ell_max.max(other.ell_max);
        let mut worst = 0.0f64;
        for c in 0..4 {
            for k in 0..lm_count(l) {
                let a = self.coeffs[c].get(k).copied().unwrap_or(ZERO);
                let b = other.coeffs[c].get(k).copied().unwrap_or(ZERO);
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    /// Spin-`±2` coefficients `a^{(±2)}_{ℓm} = a^E_{ℓm} ± i a^B_{ℓm}`.
    pub fn spin2(&self) -> Spin2Alm {
        let e = &self.coeffs[Component::E.index()];
        let b = &self.coeffs[Component::B.index()];
        let i = Complex64::i();
        Spin2Alm {
            ell_max: self.ell_max,
            plus: e.iter().zip(b).map(|(e, b)| e + i * b).collect(),
            minus: e.iter().zip(b).map(|(e, b)| e - i * b).collect(),
        }
    }
}

/// Coefficients of `Q ± iU` in the spin-`±2` harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct Spin2Alm {
    pub ell_max: usize,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl Spin2Alm {
    /// `(a^E, a^B)` with `a^E = (a^{(2)} + a^{(−2)})/2` and `a^B = −i(a^{(2)} − a^{(−2)})/2`.
    pub fn to_eb(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let i = Complex64::i();
        let e = self.plus.iter().zip(&self.minus).map(|(p, q)| 0.5 * (p + q)).collect();
        let b = self.plus.iter().zip(&self.minus).map(|(p, q)| -0.5 * i * (p - q)).collect();
        (e, b)
    }
}

/// `√((ℓ+2)!/(ℓ−2)!)` for `ℓ ≥ 2`, else zero.
pub fn eb_weight(ell: usize) -> f64 {
    if ell < 2 {
        return 0.0;
    }
    let l = ell as f64;
    ((l + 2.0) * (l + 1.0) * l * (l - 1.0)).sqrt()
}

/// Spin-0 coefficients of `ℰ = ½[ð̄²(Q+iU) + ð²(Q−iU)]` and `ℬ = −(i/2)[ð̄²(Q+iU) − ð²(Q−iU)]`,
/// obtained by applying the ladder factors of ð̄² to `₂Y_{ℓm}` and of ð² to `₋₂Y_{ℓm}`.
pub fn eb_via_eth(qu: &Spin2Alm) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = lm_count(qu.ell_max);
    let i = Complex64::i();
    let mut e = vec![ZERO; n];
    let mut b = vec![ZERO; n];
    for ell in 2..=qu.ell_max {
        let lower = eth_power(2, ell, EthDirection::Lower, 2).value;
        let raise = eth_power(-2, ell, EthDirection::Raise, 2).value;
        for m in -(ell as i64)..=ell as i64 {
            let k = lm_index(ell, m);
            let (p, q) = (lower * qu.plus[k], raise * qu.minus[k]);
            e[k] = 0.5 * (p + q);
            b[k] = -0.5 * i * (p - q);
        }
    }
    (e, b)
}

/// Parity `n ↦ −n`: `a^{Θ,E,V}_{ℓm} ↦ (−1)^ℓ a_{ℓm}` and `a^B_{ℓm} ↦ (−1)^{ℓ+1} a_{ℓm}`.
///
/// The transformed Θ and V maps equal the originals at `−n`, and `(Q+iU)` of the result
/// equals `(Q−iU)` of the original at `−n`.
pub fn parity_transform(alm: &AlmSet) -> AlmSet {
    let mut out = alm.clone();
    for c in Component::ALL {
        let extra = if c.is_magnetic() { -1.0 } else { 1.0 };
        for ell in 0..=alm.ell_max {
            let s = extra * sign(ell as i64);
            for m in -(ell as i64)..=ell as i64 {
                let k = lm_index(ell, m);
                out.coeffs[c.index()][k] = s * alm.coeffs[c.index()][k];
            }
        }
    }
    out
}

/// Per-multipole factors `F_ℓ` with `F_ℓ F_ℓᵀ = C_ℓ` restricted to components with positive
/// variance, for repeated synthesis.
pub struct AlmSampler {
    ell_max: usize,
    /// `(active components, factor)` per multipole.
    factors: Vec<(Vec<usize>, DMatrix<f64>)>,
}

/// Multipoles per realization in the stream numbering; bounds `ell_max`.
const STREAM_STRIDE: u64 = 1 << 20;

impl AlmSampler {
    pub fn new(spec: &AngularPowerSpectrum) -> Result<Self> {
        if spec.ell_max() as u64 >= STREAM_STRIDE {
            return Err(Error::invalid("ell_max too large"));
        }
        let factors = (0..=spec.ell_max())
            .map(|ell| {
                let cell = spec.cell(ell);
                let active: Vec<usize> = (0..4).filter(|&c| cell[c][c] > 0.0).collect();
                let sub = DMatrix::from_fn(active.len(), active.len(), |i, j| cell[active[i]][active[j]]);
                let f = psd_factor(&sub).map_err(|e| Error::numerical(format!("C_{ell}: {e}")))?;
                Ok((active, f))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlmSampler { ell_max: spec.ell_max(), factors })
    }

    /// Realization `r`; multipole `ℓ` draws from stream `r·2²⁰ + ℓ` of `seed`.
    ///
    /// `m = 0` coefficients are real with covariance `C_ℓ`; for `m > 0` the real and
    /// imaginary parts are independent with covariance `C_ℓ/2` each; `m < 0` follows from
    /// `a_{ℓ,−m} = (−1)^m a*_{ℓm}`.
    pub fn sample(&self, seed: u64, realization: u64) -> AlmSet {
        let blocks: Vec<Vec<[Complex64; 4]>> = (0..=self.ell_max)
            .into_par_iter()
            .map(|ell| {
                let mut stream = NormalStream::new(seed, realization * STREAM_STRIDE + ell as u64);
                let (active, f) = &self.factors[ell];
                let mut draw = |scale: f64| -> [f64; 4] {
                    let mut xi = vec![0.0; f.ncols()];
                    stream.fill(&mut xi);
                    let v = f * DVector::from_vec(xi);
                    let mut out = [0.0; 4];
                    for (k, &c) in active.iter().enumerate() {
                        out[c] = scale * v[k];
                    }
                    out
                };
                let mut row = vec![[ZERO; 4]; 2 * ell + 1];
                row[ell] = draw(1.0).map(|x| Complex64::new(x, 0.0));
                for m in 1..=ell {
                    let re = draw(FRAC_1_SQRT_2);
                    let im = draw(FRAC_1_SQRT_2);
                    let s = sign(m as i64);
                    for c in 0..4 {
                        let a = Complex64::new(re[c], im[c]);
                        row[ell + m][c] = a;
                        row[ell - m][c] = s * a.conj();
                    }
                }
                row
            })
            .collect();
        let mut out = AlmSet::zeros(self.ell_max);
        for (ell, row) in blocks.into_iter().enumerate() {
            for (k, vals) in row.into_iter().enumerate() {
                let idx = ell * ell + k;
                for c in 0..4 {
                    out.coeffs[c][idx] = vals[c];
                }
            }
        }
        out
    }
}

/// One realization (number 0) of the coefficients for `seed`.
pub fn synthesize_alm(spec: &AngularPowerSpectrum, seed: u64) -> Result<AlmSet> {
    Ok(AlmSampler::new(spec)?.sample(seed, 0))
}
