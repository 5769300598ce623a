//! Empirical two-point moments with jackknife standard errors.

use super::plan::FieldRealization;
use crate::error::{Error, Result};

/// Sample covariance `Ĉ_ab = cov(X_a(p), X_b(q))` for one point pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub pair: (usize, usize),
    /// `x_q − x_p`.
    pub separation: [f64; 3],
    pub components: usize,
    /// Row-major `components × components`: row for the component at `p`, column at `q`.
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl CorrelationEstimate {
    pub fn get(&self, a: usize, b: usize) -> (f64, f64) {
        let k = a * self.components + b;
        (self.value[k], self.stderr[k])
    }
}

/// Unbiased sample covariance of paired samples and its leave-one-out jackknife error.
pub fn covariance_with_jackknife(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::invalid("need at least two paired samples"));
    }
    let nf = n as f64;
    // shift by the first sample to reduce cancellation
    let (x0, y0) = (x[0], y[0]);
    let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (u, v) = (a - x0, b - y0);
        sx += u;
        sy += v;
        sxy += u * v;
    }
    let cov = (sxy - sx * sy / nf) / (nf - 1.0);
    if n == 2 {
        return Ok((cov, 0.0));
    }
    let m = nf - 1.0;
    let mut loo = Vec::with_capacity(n);
    for (a, b) in x.iter().zip(y) {
        let (u, v) = (a - x0, b - y0);
        let (tx, ty, txy) = (sx - u, sy - v, sxy - u * v);
        loo.push((txy - tx * ty / m) / (m - 1.0));
    }
    let mean = loo.iter().sum::<f64>() / nf;
    let var = loo.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() * (nf - 1.0) / nf;
    Ok((cov, var.sqrt()))
}

/// Covariance matrices between the components at each listed point pair.
pub fn estimate_correlation(real: &FieldRealization, pairs: &[(usize, usize)]) -> Result<Vec<CorrelationEstimate>> {
    let nr = real.realizations();
    if nr < 2 {
        return Err(Error::invalid("estimation needs at least two realizations"));
    }
    let np = real.points.len();
    let c = real.components;
    let series = |p: usize, a: usize| -> Vec<f64> { (0..nr).map(|r| real.get(r, p, a)).collect() };
    pairs
        .iter()
        .map(|&(p, q)| {
            if p >= np || q >= np {
                return Err(Error::invalid(format!("point pair ({p}, {q}) out of range ({np} points)")));
            }
            let mut value = vec![0.0; c * c];
            let mut stderr = vec![0.0; c * c];
            for a in 0..c {
                let xa = series(p, a);
                for b in 0..c {
                    let (v, s) = covariance_with_jackknife(&xa, &series(q, b))?;
                    value[a * c + b] = v;
                    stderr[a * c + b] = s;
                }
            }
            let (xp, xq) = (real.points[p], real.points[q]);
            Ok(CorrelationEstimate {
                pair: (p, q),
                separation: [xq[0] - xp[0], xq[1] - xp[1], xq[2] - xp[2]],
                components: c,
                value,
                stderr,
            })
        })
        .collect()
}
