//! Rank-one and rank-two correlation kernels assembled from radial coefficients and the
//! polynomial basis tensors
//!
//! `L¹ = δ_ij δ_kl`, `L² = δ_ik δ_jl + δ_il δ_jk`,
//! `L³ = r_j r_k δ_il + r_i r_l δ_jk + r_i r_k δ_jl + r_j r_l δ_ik`,
//! `L⁴ = r_i r_j δ_kl + r_k r_l δ_ij`, `L⁵ = r_i r_j r_k r_l`.

use super::cartesian::{delta, norm3, zero4, Mat3, Tensor4};
use super::radial::RadialFn;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Radii at which the Lomakin constraint is sampled.
const CONSTRAINT_RADII: [f64; 9] = [0.0, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0];
const CONSTRAINT_TOL: f64 = 1e-10;

/// Named parameterisation of a correlation kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelBasis {
    /// `c₁ δ_ij + c₂ r_i r_j`.
    LRank1,
    /// Six functions `P₁..P₆` subject to `P₄ + 2P₆ − P₂ = 0`.
    LRank2Lomakin,
    /// `K₀ L¹ + K₁ L² + K₂ L⁴ + K₃ L³ + K₄ L⁵` with the unnormalised separation.
    KRank2,
    /// In-plane `H₁, H₂, H₄, H₅`.
    HInplane,
    /// `S₁ L¹ + S₂ L² + S₃ L⁴ + S₄ L³ + S₅ L⁵` with the unit separation vector.
    SDamage,
}

impl KernelBasis {
    pub fn arity(self) -> usize {
        match self {
            KernelBasis::LRank1 => 2,
            KernelBasis::LRank2Lomakin => 6,
            KernelBasis::KRank2 | KernelBasis::SDamage => 5,
            KernelBasis::HInplane => 4,
        }
    }
}

/// Basis plus radial coefficient functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelSpec", into = "KernelSpec")]
pub struct RadialKernelSet {
    basis: KernelBasis,
    coeffs: Vec<RadialFn>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub basis: KernelBasis,
    pub coeffs: Vec<RadialFn>,
}

impl TryFrom<KernelSpec> for RadialKernelSet {
    type Error = Error;
    fn try_from(s: KernelSpec) -> Result<Self> {
        RadialKernelSet::new(s.basis, s.coeffs)
    }
}

impl From<RadialKernelSet> for KernelSpec {
    fn from(k: RadialKernelSet) -> Self {
        KernelSpec { basis: k.basis, coeffs: k.coeffs }
    }
}

impl RadialKernelSet {
    pub fn new(basis: KernelBasis, coeffs: Vec<RadialFn>) -> Result<Self> {
        if coeffs.len() != basis.arity() {
            return Err(Error::invalid(format!(
                "{basis:?} needs {} coefficient functions, got {}",
                basis.arity(),
                coeffs.len()
            )));
        }
        for c in &coeffs {
            c.validate()?;
        }
        if basis == KernelBasis::LRank2Lomakin {
            for &r in &CONSTRAINT_RADII {
                let (p2, p4, p6) = (coeffs[1].eval(r), coeffs[3].eval(r), coeffs[5].eval(r));
                let scale = 1.0 + p2.abs().max(p4.abs()).max(p6.abs());
                if (p4 + 2.0 * p6 - p2).abs() > CONSTRAINT_TOL * scale {
                    return Err(Error::invalid(format!("constraint P4 + 2 P6 - P2 = 0 violated at r = {r}")));
                }
            }
        }
        Ok(RadialKernelSet { basis, coeffs })
    }

    pub fn basis(&self) -> KernelBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[RadialFn] {
        &self.coeffs
    }

    pub fn values(&self, r: f64) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval(r)).collect()
    }
}

/// `L¹..L⁵` at the vector `v` (unnormalised).
pub fn l_tensors(v: [f64; 3]) -> [Tensor4; 5] {
    let mut l = [zero4(); 5];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    let d = delta;
                    l[0][i][j][k][m] = d(i, j) * d(k, m);
                    l[1][i][j][k][m] = d(i, k) * d(j, m) + d(i, m) * d(j, k);
                    l[2][i][j][k][m] =
                        v[j] * v[k] * d(i, m) + v[i] * v[m] * d(j, k) + v[i] * v[k] * d(j, m) + v[j] * v[m] * d(i, k);
                    l[3][i][j][k][m] = v[i] * v[j] * d(k, m) + v[k] * v[m] * d(i, j);
                    l[4][i][j][k][m] = v[i] * v[j] * v[k] * v[m];
                }
            }
        }
    }
    l
}

/// Coefficients of `L¹..L⁵` from `P₁..P₆`:
/// `(P₄, P₆, P₅ − P₆, P₃ − P₄, P₁ + P₂ − 2P₃ − 4P₅)`.
pub const LOMAKIN_TO_L: [[f64; 6]; 5] = [
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
    [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
    [1.0, 1.0, -2.0, 0.0, -4.0, 0.0],
];

/// Coefficients of `L¹..L⁵` from `K₀..K₄` (and from `S₁..S₅` on the unit vector).
pub const K_TO_L: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0],
];

fn apply<const N: usize>(m: &[[f64; N]; 5], x: &[f64]) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
    out
}

/// `Σ_q c_q L^q(v)`.
pub fn combine_l(c: &[f64; 5], v: [f64; 3]) -> Tensor4 {
    let l = l_tensors(v);
    let mut t = zero4();
    for (q, lq) in l.iter().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for m in 0..3 {
                        t[i][j][k][m] += c[q] * lq[i][j][k][m];
                    }
                }
            }
        }
    }
    t
}

/// Rank-two correlation tensor `⟨T_ij(x), T_kl(x + r)⟩` for the Lomakin, K or S bases.
pub fn rank2_corr(r: [f64; 3], kernels: &RadialKernelSet) -> Result<Tensor4> {
    let dist = norm3(r);
    let vals = kernels.values(dist);
    match kernels.basis {
        KernelBasis::LRank2Lomakin => {
            let (p2, p4, p6) = (vals[1], vals[3], vals[5]);
            let scale = 1.0 + p2.abs().max(p4.abs()).max(p6.abs());
            if (p4 + 2.0 * p6 - p2).abs() > CONSTRAINT_TOL * scale {
                return Err(Error::invalid(format!("constraint P4 + 2 P6 - P2 = 0 violated at r = {dist}")));
            }
            Ok(combine_l(&apply(&LOMAKIN_TO_L, &vals), r))
        }
        KernelBasis::KRank2 => Ok(combine_l(&apply(&K_TO_L, &vals), r)),
        KernelBasis::SDamage => {
            let n = if dist > 0.0 { r.map(|c| c / dist) } else { [0.0; 3] };
            Ok(combine_l(&apply(&K_TO_L, &vals), n))
        }
        other => Err(Error::invalid(format!("{other:?} is not a three-dimensional rank-two basis"))),
    }
}

/// Rank-one correlation tensor `c₁ δ_ij + c₂ r_i r_j`.
pub fn rank1_corr(r: [f64; 3], kernels: &RadialKernelSet) -> Result<Mat3> {
    if kernels.basis != KernelBasis::LRank1 {
        return Err(Error::invalid("rank-one evaluation needs the LRank1 basis"));
    }
    let vals = kernels.values(norm3(r));
    let mut out = [[0.0; 3]; 3];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = vals[0] * delta(a, b) + vals[1] * r[a] * r[b];
        }
    }
    Ok(out)
}

/// Least-squares coefficients of `t` on `L¹..L⁵(v)` and the largest residual entry.
/// At `v = 0` only `L¹, L²` are used.
pub fn decompose_l(t: &Tensor4, v: [f64; 3]) -> ([f64; 5], f64) {
    let l = l_tensors(v);
    let cols = if norm3(v) > 0.0 { 5 } else { 2 };
    let a = DMatrix::from_fn(81, cols, |row, q| {
        let (i, j, k, m) = (row / 27, (row / 9) % 3, (row / 3) % 3, row % 3);
        l[q][i][j][k][m]
    });
    let b = DVector::from_fn(81, |row, _| {
        let (i, j, k, m) = (row / 27, (row / 9) % 3, (row / 3) % 3, row % 3);
        t[i][j][k][m]
    });
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-12).expect("SVD factors were requested");
    let resid = (&a * &x - &b).amax();
    let mut c = [0.0; 5];
    for q in 0..cols {
        c[q] = x[q];
    }
    (c, resid)
}

/// `S₁..S₅` equivalent to `K₀..K₄` at distance `r`: `(K₀, K₁, r²K₂, r²K₃, r⁴K₄)`.
pub fn s_from_k(k: [f64; 5], r: f64) -> [f64; 5] {
    let r2 = r * r;
    [k[0], k[1], r2 * k[2], r2 * k[3], r2 * r2 * k[4]]
}
