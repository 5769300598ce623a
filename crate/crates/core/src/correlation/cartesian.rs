//! Cartesian forms of the real-basis coupling matrices and rotation-matrix columns.
//!
//! Degree-one real harmonics are proportional to `(−y, z, −x)` for orders `−1, 0, 1`,
//! so a vector with harmonic components `h_m` has Cartesian components `P h`.

use crate::coupling::gg_block;
use crate::special_fn::{real_rotation_m0, SphericalPoint};
use std::sync::OnceLock;

pub type Mat3 = [[f64; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// `P[a][m+1]`: Cartesian component `a` of the degree-one harmonic direction of order `m`.
pub const HARMONIC_TO_CARTESIAN: Mat3 = [[0.0, 0.0, -1.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn zero4() -> Tensor4 {
    [[[[0.0; 3]; 3]; 3]; 3]
}

pub fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Maps a matrix with harmonic indices to Cartesian indices: `P M Pᵀ`.
pub fn harmonic_matrix_to_cartesian(m: &Mat3) -> Mat3 {
    let p = &HARMONIC_TO_CARTESIAN;
    let mut out = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    out[a][b] += p[a][i] * p[b][j] * m[i][j];
                }
            }
        }
    }
    out
}

fn build(l: usize) -> Vec<Mat3> {
    let block = gg_block(l, 1, 1).expect("degree-one coupling blocks are well conditioned");
    let li = l as i64;
    (-li..=li)
        .map(|m| {
            let mut h = [[0.0; 3]; 3];
            for (i, row) in h.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = block.get(m, i as i64 - 1, j as i64 - 1);
                }
            }
            harmonic_matrix_to_cartesian(&h)
        })
        .collect()
}

/// Cartesian matrices `G^m_{ab} = Σ P_{ai} P_{bj} g^{m[i,j]}_{ℓ[1,1]}` for `ℓ ∈ {0, 1, 2}`,
/// indexed by `m + ℓ`.
pub fn gg_cartesian(l: usize) -> &'static [Mat3] {
    static CACHE: OnceLock<[Vec<Mat3>; 3]> = OnceLock::new();
    assert!(l <= 2, "degree-one couplings exist only for l <= 2");
    &CACHE.get_or_init(|| [build(0), build(1), build(2)])[l]
}

/// Column `θ^{U_ℓ}_{m0}(r̂)` for `m = −ℓ..ℓ`; the zero vector maps to the north pole.
pub fn theta_m0(l: usize, r: [f64; 3]) -> Vec<f64> {
    let p = SphericalPoint::from_cartesian(r);
    let li = l as i64;
    (-li..=li).map(|m| real_rotation_m0(l, m, p)).collect()
}

/// `Σ_m G^m θ^{U_2}_{m0}(r̂) = −δ/√6 + √(3/2) r̂ r̂ᵀ`.
pub fn quadrupole_sum(r: [f64; 3]) -> Mat3 {
    let th = theta_m0(2, r);
    let g = gg_cartesian(2);
    let mut out = [[0.0; 3]; 3];
    for (gm, t) in g.iter().zip(&th) {
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] += gm[a][b] * t;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_maps_harmonic_directions() {
        // Y^{-1}_1 ∝ −y, Y^0_1 ∝ z, Y^1_1 ∝ −x: the degree-one column reproduces r̂.
        let r = [0.3, -0.4, 0.5];
        let n = norm3(r);
        let th = theta_m0(1, r);
        for a in 0..3 {
            let v: f64 = (0..3).map(|k| HARMONIC_TO_CARTESIAN[a][k] * th[k]).sum();
            assert!((v - r[a] / n).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrupole_identity() {
        let r = [0.7, 0.2, -1.1];
        let n = norm3(r);
        let q = quadrupole_sum(r);
        for a in 0..3 {
            for b in 0..3 {
                let want = -delta(a, b) / 6f64.sqrt() + 1.5f64.sqrt() * r[a] * r[b] / (n * n);
                assert!((q[a][b] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn scalar_coupling_is_scaled_identity() {
        let g = gg_cartesian(0);
        for a in 0..3 {
            for b in 0..3 {
                assert!((g[0][a][b] - delta(a, b) / 3f64.sqrt()).abs() < 1e-15);
            }
        }
    }
}
