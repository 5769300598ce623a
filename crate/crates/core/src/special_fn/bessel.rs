//! Spherical and cylindrical Bessel functions.
//!
//! `j_ℓ(x)` uses a power series for small arguments, forward recurrence above the
//! turning point (`x > ℓ`) and Miller's backward recurrence below it.

/// Below this argument the power series is used for every order.
const SERIES_X: f64 = 1.0;

/// Spherical Bessel function of the first kind `j_ℓ(x)` for `x ≥ 0`.
///
/// Negative or non-finite `x` is treated by continuity as `|x|` (the function is
/// only defined on the non-negative half line here).
pub fn spherical_bessel(ell: usize, x: f64) -> f64 {
    spherical_bessel_array(ell, x)[ell]
}

/// All orders `j_0(x), …, j_{ell_max}(x)` in one pass.
pub fn spherical_bessel_array(ell_max: usize, x: f64) -> Vec<f64> {
    let x = x.abs();
    let mut out = vec![0.0; ell_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SERIES_X {
        for (ell, v) in out.iter_mut().enumerate() {
            *v = series(ell, x);
        }
        return out;
    }
    if x > ell_max as f64 {
        upward(&mut out, x);
    } else {
        miller(&mut out, x);
    }
    out
}

/// Power series `x^ℓ/(2ℓ+1)!! Σ_k (−x²/2)^k / (k! (2ℓ+3)(2ℓ+5)…(2ℓ+2k+1))`.
fn series(ell: usize, x: f64) -> f64 {
    // leading factor built incrementally to avoid overflowing (2ℓ+1)!!
    let mut lead = 1.0;
    for k in 1..=ell {
        lead *= x / (2 * k + 1) as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * (2 * ell + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn upward(out: &mut [f64], x: f64) {
    let (s, c) = x.sin_cos();
    out[0] = s / x;
    if out.len() > 1 {
        out[1] = s / (x * x) - c / x;
    }
    for ell in 1..out.len().saturating_sub(1) {
        out[ell + 1] = (2 * ell + 1) as f64 / x * out[ell] - out[ell - 1];
    }
}

fn miller(out: &mut [f64], x: f64) {
    let ell_max = out.len() - 1;
    let start = ell_max + 20 + x.ceil() as usize + (40.0 * (ell_max as f64 + x)).sqrt().ceil() as usize;
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    for n in (1..=start).rev() {
        let jm1 = (2 * n + 1) as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = n - 1;
        if idx <= ell_max {
            out[idx] = j;
        }
        if j.abs() > 1e250 {
            let scale = 1e-250;
            j *= scale;
            jp1 *= scale;
            for v in out.iter_mut() {
                *v *= scale;
            }
        }
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let norm = if j0.abs() >= j1.abs() { j0 / out[0] } else { j1 / out[1] };
    for v in out.iter_mut() {
        *v *= norm;
    }
}

/// Normalised Schoenberg kernel `Λ_ν(u) = Γ(ν+1) (2/u)^ν J_ν(u)` for
/// `ν = (d−2)/2`, `d ≥ 2`, with `Λ_ν(0) = 1`.
///
/// This is the radial profile of the isotropic positive-definite function on R^d
/// generated by a unit atom at wavenumber 1.
pub fn schoenberg_kernel(d: usize, u: f64) -> f64 {
    assert!(d >= 2, "dimension must be at least 2");
    let u = u.abs();
    let two_nu = d - 2;
    if u < 4.0 {
        return schoenberg_series(two_nu as f64 / 2.0, u);
    }
    if two_nu % 2 == 1 {
        // ν = ℓ + 1/2: Λ = (2ℓ+1)!! u^{−ℓ} j_ℓ(u)
        let ell = (two_nu - 1) / 2;
        let mut f = spherical_bessel(ell, u);
        for k in 1..=ell {
            f *= (2 * k + 1) as f64 / u;
        }
        f
    } else {
        let n = two_nu / 2;
        let mut f = bessel_j_int(n, u);
        // Γ(n+1) (2/u)^n
        for k in 1..=n {
            f *= 2.0 * k as f64 / u;
        }
        f
    }
}

fn schoenberg_series(nu: f64, u: f64) -> f64 {
    let q = -0.25 * u * u;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Cylindrical Bessel function `J_n(x)` of integer order `n ≥ 0`.
///
/// Miller's backward recurrence normalised by `J_0 + 2 Σ_k J_{2k} = 1`; the power
/// series is used for small arguments.
pub fn bessel_j_int(n: usize, x: f64) -> f64 {
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let x = x.abs();
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        let mut lead = 1.0;
        for k in 1..=n {
            lead *= x / (2.0 * k as f64);
        }
        return sign * lead * schoenberg_series(n as f64, x);
    }
    let mut start = n.max(x.ceil() as usize) + 30 + (50.0 * (n as f64 + x)).sqrt().ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut norm = 0.0_f64;
    let mut want = 0.0_f64;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx == n {
            want = j;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            let scale = 1e-250;
            j *= scale;
            jp1 *= scale;
            norm *= scale;
            want *= scale;
        }
    }
    norm += j;
    sign * want / norm
}
