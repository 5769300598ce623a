//! Component-level relations for rank-two kernels: the in-plane `H`–`T` connection, the
//! damage-tensor strategy and the turbulence-energy contraction.

use crate::error::{Error, Result};

/// In-plane kernel `T_ijkl = H₁ δ_ij δ_kl + H₂(δ_ik δ_jl + δ_il δ_jk) + H₄(δ_ij r_k r_l +
/// δ_kl r_i r_j) + H₅ r_i r_j r_k r_l` at `r ∈ ℝ²`, with `h = (H₁, H₂, H₄, H₅)`.
pub fn inplane_tensor(r: [f64; 2], h: [f64; 4]) -> [[[[f64; 2]; 2]; 2]; 2] {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut t = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    t[i][j][k][l] = h[0] * d(i, j) * d(k, l)
                        + h[1] * (d(i, k) * d(j, l) + d(i, l) * d(j, k))
                        + h[2] * (d(i, j) * r[k] * r[l] + d(k, l) * r[i] * r[j])
                        + h[3] * r[i] * r[j] * r[k] * r[l];
                }
            }
        }
    }
    t
}

/// `(H₁, H₂, H₄, H₅)` from the components at separation `(r, 0)`:
///
/// `H₁ = T₂₂₂₂ − 2T₁₂₁₂`, `H₂ = T₁₂₁₂`, `H₄ = (T₁₁₂₂ − T₂₂₂₂ + 2T₁₂₁₂)/r²`,
/// `H₅ = (T₁₁₁₁ + T₂₂₂₂ − 2T₁₁₂₂ − 4T₁₂₁₂)/r⁴`.
pub fn inplane_h_from_t(t1111: f64, t2222: f64, t1122: f64, t1212: f64, r: f64) -> Result<[f64; 4]> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("separation must be positive, got {r}")));
    }
    let r2 = r * r;
    Ok([
        t2222 - 2.0 * t1212,
        t1212,
        (t1122 - t2222 + 2.0 * t1212) / r2,
        (t1111 + t2222 - 2.0 * t1122 - 4.0 * t1212) / (r2 * r2),
    ])
}

/// `⟨ψ(0), ψ(r)⟩ = 9/4 S₁ + 3/2 S₂ + 3/2 S₃ + S₄ + 1/4 S₅` for `ψ = R_kk/2`.
pub fn reynolds_energy_corr(s: [f64; 5]) -> f64 {
    2.25 * s[0] + 1.5 * s[1] + 1.5 * s[2] + s[3] + 0.25 * s[4]
}

/// Damage coefficients and the consistency residual `M₂ − M₄ − 2M₆`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamageCoefficients {
    pub a: [f64; 5],
    pub residual: f64,
}

/// `A₁ = M₄`, `A₂ = M₆`, `A₃ = M₃ − M₄`, `A₄ = M₅ − M₆`, `A₅ = M₁ − M₃ − 4M₅ + 2M₆`.
pub fn damage_a_from_m(m: [f64; 6]) -> DamageCoefficients {
    let [m1, m2, m3, m4, m5, m6] = m;
    DamageCoefficients { a: [m4, m6, m3 - m4, m5 - m6, m1 - m3 - 4.0 * m5 + 2.0 * m6], residual: m2 - m4 - 2.0 * m6 }
}

/// Inverse of [`damage_a_from_m`] on the constraint set `M₂ = M₄ + 2M₆`.
pub fn damage_m_from_a(a: [f64; 5]) -> [f64; 6] {
    let [a1, a2, a3, a4, a5] = a;
    let m4 = a1;
    let m6 = a2;
    let m3 = a3 + a1;
    let m5 = a4 + a2;
    let m1 = a5 + m3 + 4.0 * m5 - 2.0 * m6;
    [m1, m4 + 2.0 * m6, m3, m4, m5, m6]
}

/// Components `M₁..M₇` of the damage kernel along `n = e₁` from `S₁..S₅`.
pub fn damage_m_from_s(s: [f64; 5]) -> [f64; 7] {
    let [s1, s2, s3, s4, s5] = s;
    [s1 + 2.0 * s2 + 2.0 * s3 + 4.0 * s4 + s5, s1 + 2.0 * s2, s1 + s3, s1, s2 + s4, s2, 0.0]
}
