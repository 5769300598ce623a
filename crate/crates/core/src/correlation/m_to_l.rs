//! Harmonic-built `M`-functions and their expansions in the polynomial `L`-basis.
//!
//! Rank one: `M¹ = G⁰₀`, `M² = r² Σ_m G^m₂ θ^{U₂}_{m0}(r̂)`.
//! Rank two, with `G^m_ℓ` the Cartesian degree-one coupling matrices:
//! `M¹ = G⁰₀ ⊗ G⁰₀`, `M² = Σ g^{0[m₁,m₂]}_{0[2,2]} G^{m₁}₂ ⊗ G^{m₂}₂`,
//! `M³ = (r²/√2) Σ_m (G⁰₀ ⊗ G^m₂ + G^m₂ ⊗ G⁰₀) θ^{U₂}_{m0}`,
//! `M⁴ = r² Σ g^{m[m₁,m₂]}_{2[2,2]} G^{m₁}₂ ⊗ G^{m₂}₂ θ^{U₂}_{m0}`,
//! `M⁵ = r⁴ Σ g^{m[m₁,m₂]}_{4[2,2]} G^{m₁}₂ ⊗ G^{m₂}₂ θ^{U₄}_{m0}`.
//!
//! Each `Mⁿ` is homogeneous of degree `0, 0, 2, 2, 4`, and equals `r^{deg}` times a fixed
//! combination of `L^q(r̂)`.

use super::cartesian::{delta, gg_cartesian, norm3, theta_m0, zero4, Mat3, Tensor4};
use super::rank2::combine_l;
use crate::coupling::gg_block;

/// Rows: `M¹..M⁵`; columns: coefficients of `L¹..L⁵(r̂)`.
pub fn rank2_m_in_l() -> [[f64; 5]; 5] {
    let s5 = 5f64.sqrt();
    let s14 = 14f64.sqrt();
    let s70 = 70f64.sqrt();
    [
        [1.0 / 3.0, 0.0, 0.0, 0.0, 0.0],
        [-1.0 / (3.0 * s5), 1.0 / (2.0 * s5), 0.0, 0.0, 0.0],
        [-1.0 / 3.0, 0.0, 0.0, 0.5, 0.0],
        [2.0 * 2f64.sqrt() / (3.0 * 7f64.sqrt()), -1.0 / s14, 3.0 / (2.0 * s14), -(2.0f64 / 7.0).sqrt(), 0.0],
        [
            1.0 / (2.0 * s70),
            1.0 / (2.0 * s70),
            -s5 / (2.0 * s14),
            -s5 / (2.0 * s14),
            35f64.sqrt() / (2.0 * 2f64.sqrt()),
        ],
    ]
}

/// Homogeneity degrees of `M¹..M⁵`.
pub const RANK2_DEGREES: [i32; 5] = [0, 0, 2, 2, 4];

/// Both sides of an identity family at one separation.
#[derive(Debug, Clone, PartialEq)]
pub struct Identities<T> {
    pub m_side: Vec<T>,
    pub l_side: Vec<T>,
}

fn outer(a: &Mat3, b: &Mat3, w: f64, t: &mut Tensor4) {
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    t[i][j][k][l] += w * a[i][j] * b[k][l];
                }
            }
        }
    }
}

/// Rank-one identities `M¹ = L¹/√3` and `M² = r²(−L¹/√6) + √(3/2) L²` with `L² = r_i r_j`.
pub fn rank1_identities(r: [f64; 3]) -> Identities<Mat3> {
    let g0 = gg_cartesian(0)[0];
    let g2 = gg_cartesian(2);
    let r2 = r.iter().map(|x| x * x).sum::<f64>();
    let th = theta_m0(2, r);
    let mut m2 = [[0.0; 3]; 3];
    if r2 > 0.0 {
        for (gm, t) in g2.iter().zip(&th) {
            for a in 0..3 {
                for b in 0..3 {
                    m2[a][b] += r2 * gm[a][b] * t;
                }
            }
        }
    }
    let mut l1 = [[0.0; 3]; 3];
    let mut l2 = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            l1[a][b] = delta(a, b) / 3f64.sqrt();
            l2[a][b] = -r2 * delta(a, b) / 6f64.sqrt() + 1.5f64.sqrt() * r[a] * r[b];
        }
    }
    Identities { m_side: vec![g0, m2], l_side: vec![l1, l2] }
}

/// Rank-two identities `Mⁿ(r) = r^{deg n} Σ_q c_{nq} L^q(r̂)`.
pub fn rank2_identities(r: [f64; 3]) -> Identities<Tensor4> {
    let g0 = gg_cartesian(0)[0];
    let g2 = gg_cartesian(2);
    let dist = norm3(r);
    let th2 = theta_m0(2, r);
    let th4 = theta_m0(4, r);
    let b0 = gg_block(0, 2, 2).expect("coupling block");
    let b2 = gg_block(2, 2, 2).expect("coupling block");
    let b4 = gg_block(4, 2, 2).expect("coupling block");
    let mut m = vec![zero4(); 5];
    outer(&g0, &g0, 1.0, &mut m[0]);
    for m1 in -2i64..=2 {
        for m2 in -2i64..=2 {
            let (a, b) = (&g2[(m1 + 2) as usize], &g2[(m2 + 2) as usize]);
            outer(a, b, b0.get(0, m1, m2), &mut m[1]);
        }
    }
    if dist > 0.0 {
        let r2 = dist * dist;
        for (mm, t) in (-2i64..=2).zip(&th2) {
            let gm = &g2[(mm + 2) as usize];
            let w = r2 / 2f64.sqrt() * t;
            outer(&g0, gm, w, &mut m[2]);
            outer(gm, &g0, w, &mut m[2]);
            for m1 in -2i64..=2 {
                for m2 in -2i64..=2 {
                    let c = b2.get(mm, m1, m2);
                    if c != 0.0 {
                        outer(&g2[(m1 + 2) as usize], &g2[(m2 + 2) as usize], r2 * c * t, &mut m[3]);
                    }
                }
            }
        }
        for (mm, t) in (-4i64..=4).zip(&th4) {
            for m1 in -2i64..=2 {
                for m2 in -2i64..=2 {
                    let c = b4.get(mm, m1, m2);
                    if c != 0.0 {
                        outer(&g2[(m1 + 2) as usize], &g2[(m2 + 2) as usize], r2 * r2 * c * t, &mut m[4]);
                    }
                }
            }
        }
    }
    let rhat = if dist > 0.0 { r.map(|c| c / dist) } else { [0.0; 3] };
    let coeffs = rank2_m_in_l();
    let l_side = coeffs
        .iter()
        .zip(RANK2_DEGREES)
        .map(|(c, deg)| {
            let scaled = c.map(|v| v * dist.powi(deg));
            combine_l(&scaled, rhat)
        })
        .collect();
    Identities { m_side: m, l_side }
}

/// Largest entrywise gap between the two sides of the rank-two identities.
pub fn rank2_identity_gap(r: [f64; 3]) -> Vec<f64> {
    let id = rank2_identities(r);
    id.m_side
        .iter()
        .zip(&id.l_side)
        .map(|(a, b)| {
            let mut g: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            g = g.max((a[i][j][k][l] - b[i][j][k][l]).abs());
                        }
                    }
                }
            }
            g
        })
        .collect()
}

/// Largest entrywise gap between the two sides of the rank-one identities.
pub fn rank1_identity_gap(r: [f64; 3]) -> Vec<f64> {
    let id = rank1_identities(r);
    id.m_side
        .iter()
        .zip(&id.l_side)
        .map(|(a, b)| {
            let mut g: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    g = g.max((a[i][j] - b[i][j]).abs());
                }
            }
            g
        })
        .collect()
}
