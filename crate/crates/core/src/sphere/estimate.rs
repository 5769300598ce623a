//! Angular power spectrum estimation from coefficient ensembles.

use super::alm::AlmSet;
use super::spectrum::Cell;
use crate::error::{Error, Result};
use crate::special_fn::lm_index;

/// Ensemble mean of `Ĉ^{XY}_ℓ = (2ℓ+1)⁻¹ Σ_m Re(a^{X*}_{ℓm} a^Y_{ℓm})` and its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct CellEstimate {
    pub ell_max: usize,
    pub realizations: usize,
    pub mean: Vec<Cell>,
    /// Sample standard deviation over `√n`; present with at least two realizations.
    pub stderr: Option<Vec<Cell>>,
}

/// `Ĉ_ℓ` of a single coefficient set; unbiased for `C_ℓ`.
pub fn cell_of(alm: &AlmSet) -> Vec<Cell> {
    (0..=alm.ell_max)
        .map(|ell| {
            let mut c = [[0.0; 4]; 4];
            let l = ell as i64;
            for (x, row) in c.iter_mut().enumerate() {
                for (y, v) in row.iter_mut().enumerate() {
                    let s: f64 = (-l..=l)
                        .map(|m| {
                            let k = lm_index(ell, m);
                            (alm.coeffs[x][k].conj() * alm.coeffs[y][k]).re
                        })
                        .sum();
                    *v = s / (2 * ell + 1) as f64;
                }
            }
            c
        })
        .collect()
}

/// Mean and standard error of [`cell_of`] over an ensemble with a common `ell_max`.
pub fn estimate_cell(ensemble: &[AlmSet]) -> Result<CellEstimate> {
    let first = ensemble.first().ok_or_else(|| Error::invalid("estimation needs at least one realization"))?;
    let ell_max = first.ell_max;
    if ensemble.iter().any(|a| a.ell_max != ell_max) {
        return Err(Error::invalid("all realizations must share ell_max"));
    }
    let per: Vec<Vec<Cell>> = ensemble.iter().map(cell_of).collect();
    let n = per.len() as f64;
    let mut mean = vec![[[0.0; 4]; 4]; ell_max + 1];
    for cells in &per {
        for (m, c) in mean.iter_mut().zip(cells) {
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += c[i][j] / n;
                }
            }
        }
    }
    let stderr = (per.len() >= 2).then(|| {
        let mut var = vec![[[0.0; 4]; 4]; ell_max + 1];
        for cells in &per {
            for ((v, c), m) in var.iter_mut().zip(cells).zip(&mean) {
                for i in 0..4 {
                    for j in 0..4 {
                        v[i][j] += (c[i][j] - m[i][j]).powi(2);
                    }
                }
            }
        }
        var.into_iter().map(|v| v.map(|row| row.map(|s| (s / (n - 1.0) / n).sqrt()))).collect()
    });
    Ok(CellEstimate { ell_max, realizations: per.len(), mean, stderr })
}
