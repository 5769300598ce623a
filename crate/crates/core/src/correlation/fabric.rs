//! Fabric (damage) tensors of an orientation density on the unit sphere.
//!
//! `f_ij = n_i n_j − δ_ij/3`,
//! `f_ijkl = n_i n_j n_k n_l − (1/7)(δ_ij n_k n_l + five permutations)
//!   + (1/35)(δ_ij δ_kl + δ_ik δ_jl + δ_il δ_jk)`,
//! `D₀ = (1/4π)∫p`, `D_ij = (1/4π)(15/2)∫p f_ij`, `D_ijkl = (1/4π)(945/24)∫p f_ijkl`.

use super::cartesian::{delta, zero4, Mat3, Tensor4};
use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct FabricTensors {
    pub d0: f64,
    pub d2: Mat3,
    pub d4: Tensor4,
}

pub fn f2(n: [f64; 3]) -> Mat3 {
    let mut f = [[0.0; 3]; 3];
    for (i, row) in f.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = n[i] * n[j] - delta(i, j) / 3.0;
        }
    }
    f
}

pub fn f4(n: [f64; 3]) -> Tensor4 {
    let d = delta;
    let mut f = zero4();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let two = d(i, j) * n[k] * n[l]
                        + d(i, k) * n[j] * n[l]
                        + d(i, l) * n[j] * n[k]
                        + d(j, k) * n[i] * n[l]
                        + d(j, l) * n[i] * n[k]
                        + d(k, l) * n[i] * n[j];
                    let zero = d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k);
                    f[i][j][k][l] = n[i] * n[j] * n[k] * n[l] - two / 7.0 + zero / 35.0;
                }
            }
        }
    }
    f
}

/// Tensors from samples `(n, w)` where `w` already includes the quadrature weight, i.e.
/// `Σ w g(n) ≈ ∫ p(n) g(n) dΩ`.
pub fn fabric_tensors(samples: &[([f64; 3], f64)]) -> Result<FabricTensors> {
    if samples.is_empty() {
        return Err(Error::invalid("fabric tensors need at least one sample"));
    }
    let mut out = FabricTensors { d0: 0.0, d2: [[0.0; 3]; 3], d4: zero4() };
    let c2 = 7.5 / (4.0 * PI);
    let c4 = 945.0 / 24.0 / (4.0 * PI);
    for &(n, w) in samples {
        if !w.is_finite() {
            return Err(Error::invalid("sample weights must be finite"));
        }
        out.d0 += w / (4.0 * PI);
        let a = f2(n);
        let b = f4(n);
        for i in 0..3 {
            for j in 0..3 {
                out.d2[i][j] += c2 * w * a[i][j];
                for k in 0..3 {
                    for l in 0..3 {
                        out.d4[i][j][k][l] += c4 * w * b[i][j][k][l];
                    }
                }
            }
        }
    }
    Ok(out)
}
