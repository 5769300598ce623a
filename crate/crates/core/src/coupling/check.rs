//! Gaunt consistency suite: closed form against direct quadrature.

use super::gg::GGTable;
use crate::error::Result;
use crate::special_fn::{lm_index, real_harmonics_all, QuadratureRule};
use std::time::Instant;

/// Outcome of [`gaunt_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GauntReport {
    pub ell_max: usize,
    /// Number of `(ℓ₁m₁, ℓ₂m₂, ℓ₃m₃)` entries compared.
    pub entries: usize,
    pub max_abs_error: f64,
    /// Entry attaining the largest error, as `(ℓ₁, m₁, ℓ₂, m₂, ℓ₃, m₃)`.
    pub worst: (usize, i64, usize, i64, usize, i64),
    pub elapsed_s: f64,
}

/// Compares the closed-form real Gaunt integral with a Gauss–Legendre product rule,
/// exact for the degree `3·ell_max` integrand, over every triple with `ℓᵢ ≤ ell_max`.
pub fn gaunt_check(ell_max: usize) -> Result<GauntReport> {
    let start = Instant::now();
    let table = GGTable::new(ell_max)?;
    let rule = QuadratureRule::with_rings((3 * ell_max) / 2 + 1);
    let values: Vec<Vec<f64>> = rule.nodes.iter().map(|p| real_harmonics_all(ell_max, *p)).collect();
    let mut report = GauntReport { ell_max, entries: 0, max_abs_error: 0.0, worst: (0, 0, 0, 0, 0, 0), elapsed_s: 0.0 };
    let li = |l: usize| l as i64;
    for l1 in 0..=ell_max {
        for l2 in 0..=ell_max {
            for l3 in 0..=ell_max {
                for m1 in -li(l1)..=li(l1) {
                    for m2 in -li(l2)..=li(l2) {
                        for m3 in -li(l3)..=li(l3) {
                            let (a, b, c) = (lm_index(l1, m1), lm_index(l2, m2), lm_index(l3, m3));
                            let quad: f64 = values.iter().zip(&rule.weights).map(|(y, w)| y[a] * y[b] * y[c] * w).sum();
                            let err = (table.gaunt(l1, m1, l2, m2, l3, m3) - quad).abs();
                            report.entries += 1;
                            if err > report.max_abs_error {
                                report.max_abs_error = err;
                                report.worst = (l1, m1, l2, m2, l3, m3);
                            }
                        }
                    }
                }
            }
        }
    }
    report.elapsed_s = start.elapsed().as_secs_f64();
    Ok(report)
}
