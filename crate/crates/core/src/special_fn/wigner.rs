//! Wigner small-d functions through Jacobi polynomials.
//!
//! With `k = j − max(|m|, |m'|)`, `a = |m − m'|`, `b = |m + m'|`,
//!
//! `d^j_{m'm}(β) = (−1)^λ √(k!(k+a+b)!/((k+a)!(k+b)!)) sin^a(β/2) cos^b(β/2) P_k^{(a,b)}(cos β)`
//!
//! with the sign exponent `λ` chosen by which of `j±m`, `j±m'` attains `k`
//! ([`phase_exponent`]). Sweeping `k` upward yields every degree for a fixed pair
//! of orders with one three-term recurrence.

/// Sign exponent `λ` of the Jacobi form.
fn phase_exponent(mp: i64, m: i64, j: i64) -> i64 {
    let k = (j + m).min(j - m).min(j + mp).min(j - mp);
    if k != j + m && (k == j - m || k == j + mp) {
        0
    } else {
        mp - m
    }
}

/// `d^j_{m'm}(β)` for a single degree.
pub fn wigner_small_d(j: usize, mp: i64, m: i64, beta: f64) -> f64 {
    let big = mp.unsigned_abs().max(m.unsigned_abs()) as usize;
    if big > j {
        return 0.0;
    }
    wigner_small_d_column(j, mp, m, beta)[j - big]
}

/// `d^j_{m'm}(β)` for `j = max(|m|,|m'|), …, j_max`; entry `i` holds degree
/// `max(|m|,|m'|) + i`. Empty when `j_max < max(|m|,|m'|)`.
pub fn wigner_small_d_column(j_max: usize, mp: i64, m: i64, beta: f64) -> Vec<f64> {
    let big = mp.unsigned_abs().max(m.unsigned_abs()) as usize;
    if j_max < big {
        return Vec::new();
    }
    let a = (m - mp).unsigned_abs() as usize;
    let b = (m + mp).unsigned_abs() as usize;
    let af = a as f64;
    let bf = b as f64;
    let x = beta.cos();
    let half = 0.5 * beta;
    let pre = half.sin().powi(a as i32) * half.cos().powi(b as i32);
    let sign = if phase_exponent(mp, m, big as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let n_k = j_max - big + 1;
    let mut out = Vec::with_capacity(n_k);
    // ratio R_k = k!(k+a+b)!/((k+a)!(k+b)!), R_0 = C(a+b, a)
    let mut ratio = binomial(a + b, a);
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for k in 0..n_k {
        if k > 0 {
            let kf = k as f64;
            ratio *= (kf + af + bf) * kf / ((kf + af) * (kf + bf));
            let p_next = if k == 1 {
                (af + 1.0) + (af + bf + 2.0) * (x - 1.0) / 2.0
            } else {
                let s = 2.0 * kf + af + bf;
                let c1 = 2.0 * kf * (kf + af + bf) * (s - 2.0);
                let c2 = (s - 1.0) * (s * (s - 2.0) * x + af * af - bf * bf);
                let c3 = 2.0 * (kf + af - 1.0) * (kf + bf - 1.0) * s;
                (c2 * p - c3 * p_prev) / c1
            };
            p_prev = p;
            p = p_next;
        }
        out.push(sign * ratio.sqrt() * pre * p);
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        let b: f64 = 0.83;
        let (s, c) = b.sin_cos();
        assert!((wigner_small_d(1, 0, 0, b) - c).abs() < 1e-15);
        assert!((wigner_small_d(1, 1, 0, b) - (-s / 2f64.sqrt())).abs() < 1e-15);
        assert!((wigner_small_d(1, 0, 1, b) - (s / 2f64.sqrt())).abs() < 1e-15);
        assert!((wigner_small_d(1, 1, 1, b) - (1.0 + c) / 2.0).abs() < 1e-15);
        assert!((wigner_small_d(1, 1, -1, b) - (1.0 - c) / 2.0).abs() < 1e-15);
        assert!((wigner_small_d(2, 0, 0, b) - (1.5 * c * c - 0.5)).abs() < 1e-15);
        let d2_21 = -(1.0 + c) / 2.0 * s;
        assert!((wigner_small_d(2, 2, 1, b) - d2_21).abs() < 1e-15);
        let d2_20 = (3.0f64 / 8.0).sqrt() * s * s;
        assert!((wigner_small_d(2, 2, 0, b) - d2_20).abs() < 1e-15);
    }

    #[test]
    fn rows_are_unit_vectors() {
        for j in 0..=12usize {
            let ji = j as i64;
            for mp in -ji..=ji {
                let norm: f64 = (-ji..=ji).map(|m| wigner_small_d(j, mp, m, 1.1).powi(2)).sum();
                assert!((norm - 1.0).abs() < 1e-12, "j={j} mp={mp} norm={norm}");
            }
        }
    }

    #[test]
    fn index_symmetries() {
        for j in 0..=9usize {
            let ji = j as i64;
            for mp in -ji..=ji {
                for m in -ji..=ji {
                    let d = wigner_small_d(j, mp, m, 2.2);
                    let sign = if (m - mp).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    assert!((d - sign * wigner_small_d(j, m, mp, 2.2)).abs() < 1e-13);
                    assert!((d - wigner_small_d(j, -m, -mp, 2.2)).abs() < 1e-13);
                }
            }
        }
    }
}
