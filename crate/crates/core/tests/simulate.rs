#![allow(clippy::needless_range_loop)]
use isofield::correlation::{scalar_corr, vector_corr, Normalization, SpectralMeasure, VectorSpectralPair};
use isofield::simulate::{
    c_coefficients, covariance_with_jackknife, estimate_correlation, pair_atoms, psd_factor, simulate, simulate_dyadic,
    simulate_scalar, simulate_vector, vector_expansion_covariance, with_threads, FieldModel, SimulationPlan,
};
use isofield::special_fn::{lm_count, real_harmonics_all, spherical_bessel_array, SphericalPoint};
use nalgebra::DVector;

fn basis(x: [f64; 3], lambda: f64, ell_max: usize) -> Vec<f64> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let y = real_harmonics_all(ell_max, SphericalPoint::from_cartesian(x));
    let j = spherical_bessel_array(ell_max, lambda * r);
    let mut out = Vec::new();
    for (l, jl) in j.iter().enumerate() {
        for m in 0..(2 * l + 1) {
            out.push(y[l * l + m] * jl);
        }
    }
    out
}

/// `Cov(T_i(x), T_j(y))` implied by the unit-mass coefficient covariance `C_n`.
fn implied_covariance(n: usize, lambda: f64, ell_max: usize, x: [f64; 3], y: [f64; 3]) -> [[f64; 3]; 3] {
    let c = c_coefficients(n, ell_max).unwrap();
    let (bx, by) = (basis(x, lambda, ell_max), basis(y, lambda, ell_max));
    let k = lm_count(ell_max);
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for a in 0..k {
                for b in 0..k {
                    s += bx[a] * c[(i * k + a, j * k + b)] * by[b];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

fn bary(phi1: &[(f64, f64)], phi2: &[(f64, f64)]) -> VectorSpectralPair {
    VectorSpectralPair::new(
        SpectralMeasure::from_pairs(phi1).unwrap(),
        SpectralMeasure::from_pairs(phi2).unwrap(),
        Normalization::Barycentric,
    )
    .unwrap()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[test]
fn coefficient_covariance_reproduces_vector_kernel() {
    // λ|x| ≤ 1.2 so degree 14 truncation is converged far below the tolerance
    let lambda = 1.3;
    let ell_max = 14;
    let pts =
        [([0.3, -0.2, 0.5], [-0.4, 0.1, 0.2]), ([0.0, 0.0, 0.0], [0.5, 0.4, -0.6]), ([0.7, 0.1, 0.0], [0.7, 0.1, 0.0])];
    for n in [1usize, 2] {
        let pair = if n == 1 { bary(&[(lambda, 1.0)], &[]) } else { bary(&[], &[(lambda, 1.0)]) };
        for (x, y) in pts {
            let got = implied_covariance(n, lambda, ell_max, x, y);
            let want = vector_corr(sub(x, y), &pair).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert!(
                        (got[i][j] - want[i][j]).abs() < 1e-10,
                        "n={n} x={x:?} y={y:?} ({i},{j}): {} vs {}",
                        got[i][j],
                        want[i][j]
                    );
                }
            }
        }
    }
}

#[test]
fn coefficient_covariance_is_psd_at_degree_four() {
    let pair = bary(&[(0.0, 2.0), (1.5, 0.7)], &[(0.0, 1.0), (2.0, 0.4)]);
    let atoms = pair_atoms(&pair).unwrap();
    assert_eq!(atoms.len(), 3);
    for k in 0..atoms.len() {
        let cov = vector_expansion_covariance(&pair, 4, k).unwrap();
        assert_eq!(cov.matrix.nrows(), 6 * 25);
        assert!(cov.min_eigenvalue >= -1e-9, "atom {k}: {}", cov.min_eigenvalue);
        assert!((&cov.matrix - cov.matrix.transpose()).amax() < 1e-14);
    }
}

#[test]
fn truncation_keeps_a_principal_submatrix() {
    let (lo, hi) = (3usize, 5usize);
    for n in [1, 2] {
        let a = c_coefficients(n, lo).unwrap();
        let b = c_coefficients(n, hi).unwrap();
        let (kl, kh) = (lm_count(lo), lm_count(hi));
        for i in 0..3 * kl {
            for j in 0..3 * kl {
                let (bi, bj) = ((i / kl) * kh + i % kl, (j / kl) * kh + j % kl);
                assert_eq!(a[(i, j)], b[(bi, bj)]);
            }
        }
    }
}

#[test]
fn psd_factor_reconstructs() {
    let c = c_coefficients(2, 3).unwrap();
    let f = psd_factor(&c).unwrap();
    assert!((&f * f.transpose() - &c).amax() < 1e-11);
}

#[test]
fn zero_wavenumber_scalar_field_is_spatially_constant() {
    let plan = SimulationPlan {
        model: FieldModel::Scalar { spectrum: SpectralMeasure::single(0.0, 2.5).unwrap() },
        ell_max: 6,
        points: vec![[0.0, 0.0, 0.0], [1.0, 2.0, -3.0], [-5.0, 0.5, 0.1]],
        realizations: 2000,
        master_seed: 11,
    };
    let out = simulate_scalar(&plan).unwrap();
    for r in 0..out.realizations() {
        let v0 = out.get(r, 0, 0);
        for p in 1..3 {
            assert!((out.get(r, p, 0) - v0).abs() < 1e-12);
        }
    }
    let xs: Vec<f64> = (0..out.realizations()).map(|r| out.get(r, 0, 0)).collect();
    let (var, se) = covariance_with_jackknife(&xs, &xs).unwrap();
    assert!((var - 2.5).abs() < 4.0 * se, "{var} ± {se}");
}

#[test]
fn scalar_monte_carlo_matches_closed_form() {
    let spectrum = SpectralMeasure::from_pairs(&[(0.8, 1.0), (2.0, 0.5)]).unwrap();
    let points = vec![[0.0, 0.0, 0.0], [0.4, 0.0, 0.0], [0.0, 0.9, 0.3], [-0.6, 0.6, 0.6]];
    let plan = SimulationPlan {
        model: FieldModel::Scalar { spectrum: spectrum.clone() },
        ell_max: 12,
        points: points.clone(),
        realizations: 20000,
        master_seed: 2024,
    };
    let out = simulate_scalar(&plan).unwrap();
    let pairs = [(0, 0), (0, 1), (0, 2), (1, 3), (2, 3)];
    for est in estimate_correlation(&out, &pairs).unwrap() {
        let r = est.separation.iter().map(|v| v * v).sum::<f64>().sqrt();
        let want = scalar_corr(r, &spectrum, 3).unwrap();
        let (got, se) = est.get(0, 0);
        assert!((got - want).abs() < 4.0 * se + 1e-12, "{:?}: {got} vs {want} (se {se})", est.pair);
    }
}

#[test]
fn vector_monte_carlo_matches_closed_form() {
    let pair = bary(&[(1.1, 0.6)], &[(1.7, 0.9)]);
    let points = vec![[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.2, -0.3, 0.4], [0.0, 0.0, -0.7]];
    let plan = SimulationPlan {
        model: FieldModel::Vector { pair: pair.clone() },
        ell_max: 8,
        points: points.clone(),
        realizations: 8000,
        master_seed: 99,
    };
    let out = simulate_vector(&plan).unwrap();
    for est in estimate_correlation(&out, &[(0, 0), (0, 1), (1, 2), (2, 3)]).unwrap() {
        let want = vector_corr(est.separation, &pair).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (got, se) = est.get(i, j);
                // the estimate pairs T_i(x_p) with T_j(x_q), i.e. B_ij(x_p − x_q)
                let w = want[j][i];
                assert!((got - w).abs() < 5.0 * se + 1e-12, "{:?} ({i},{j}): {got} vs {w} (se {se})", est.pair);
            }
        }
    }
}

#[test]
fn potential_only_field_at_origin_is_isotropic() {
    // only ℓ = 0 survives at the origin, so Cov(T(0)) = Φ₁/3 · I
    let pair = bary(&[(1.0, 3.0)], &[]);
    let plan = SimulationPlan {
        model: FieldModel::Vector { pair },
        ell_max: 4,
        points: vec![[0.0, 0.0, 0.0]],
        realizations: 6000,
        master_seed: 5,
    };
    let out = simulate_vector(&plan).unwrap();
    let est = &estimate_correlation(&out, &[(0, 0)]).unwrap()[0];
    for i in 0..3 {
        for j in 0..3 {
            let (got, se) = est.get(i, j);
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((got - want).abs() < 5.0 * se, "({i},{j}): {got} ± {se}");
        }
    }
}

#[test]
fn realizations_are_identical_across_thread_counts() {
    let plan = SimulationPlan {
        model: FieldModel::Vector { pair: bary(&[(0.0, 2.0), (1.2, 1.0)], &[(0.0, 1.0), (0.7, 0.5)]) },
        ell_max: 5,
        points: vec![[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]],
        realizations: 64,
        master_seed: 123456789,
    };
    let runs: Vec<_> = [1usize, 2, 8].iter().map(|&t| with_threads(Some(t), || simulate(&plan).unwrap())).collect();
    for r in &runs[1..] {
        assert_eq!(
            r.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            runs[0].values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
    let other = SimulationPlan { master_seed: 123456790, ..plan.clone() };
    assert_ne!(simulate(&other).unwrap().values, runs[0].values);
}

#[test]
fn dyadic_field_with_zero_coupling_is_mu_identity() {
    let a = bary(&[(1.0, 1.0)], &[(2.0, 1.0)]);
    let plan = SimulationPlan {
        model: FieldModel::Dyadic { mu: 1.7, s: 0.0, a: a.clone(), b: a },
        ell_max: 4,
        points: vec![[0.2, 0.1, 0.0], [0.0, 0.3, 0.3]],
        realizations: 10,
        master_seed: 1,
    };
    let out = simulate_dyadic(&plan).unwrap();
    assert_eq!(out.components, 4);
    for r in 0..10 {
        for p in 0..2 {
            assert_eq!([out.get(r, p, 0), out.get(r, p, 1), out.get(r, p, 2), out.get(r, p, 3)], [1.7, 0.0, 0.0, 1.7]);
        }
    }
}

#[test]
fn dyadic_moments_match_product_of_independent_fields() {
    // E[C₁₁] = μ, Var(C₁₂) = s² B^a_11(0) B^b_22(0)
    let a = bary(&[(1.0, 1.5)], &[]);
    let b = bary(&[], &[(1.0, 2.0)]);
    let (mu, s) = (0.5, 2.0);
    let plan = SimulationPlan {
        model: FieldModel::Dyadic { mu, s, a: a.clone(), b: b.clone() },
        ell_max: 4,
        points: vec![[0.0, 0.0, 0.0]],
        realizations: 20000,
        master_seed: 77,
    };
    let out = simulate_dyadic(&plan).unwrap();
    let n = out.realizations();
    let c11: Vec<f64> = (0..n).map(|r| out.get(r, 0, 0)).collect();
    let c12: Vec<f64> = (0..n).map(|r| out.get(r, 0, 1)).collect();
    let ba = vector_corr([0.0; 3], &a).unwrap();
    let bb = vector_corr([0.0; 3], &b).unwrap();
    let mean = c11.iter().sum::<f64>() / n as f64;
    let (var11, _) = covariance_with_jackknife(&c11, &c11).unwrap();
    assert!((mean - mu).abs() < 5.0 * (var11 / n as f64).sqrt(), "mean {mean}");
    let (var12, se12) = covariance_with_jackknife(&c12, &c12).unwrap();
    let want = s * s * ba[0][0] * bb[1][1];
    assert!((var12 - want).abs() < 5.0 * se12, "{var12} vs {want} ± {se12}");
}

#[test]
fn scalar_field_marginals_are_gaussian() {
    let plan = SimulationPlan {
        model: FieldModel::Scalar { spectrum: SpectralMeasure::from_pairs(&[(1.0, 1.0), (3.0, 1.0)]).unwrap() },
        ell_max: 10,
        points: vec![[0.3, 0.4, -0.2]],
        realizations: 40000,
        master_seed: 31,
    };
    let out = simulate_scalar(&plan).unwrap();
    let xs: Vec<f64> = (0..out.realizations()).map(|r| out.get(r, 0, 0)).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let skew = m3 / m2.powf(1.5);
    let exkurt = m4 / (m2 * m2) - 3.0;
    // standard errors √(6/n) and √(24/n)
    assert!(skew.abs() < 5.0 * (6.0 / n).sqrt(), "skewness {skew}");
    assert!(exkurt.abs() < 5.0 * (24.0 / n).sqrt(), "excess kurtosis {exkurt}");
}

#[test]
fn estimator_is_permutation_invariant_and_zero_on_constants() {
    let xs: Vec<f64> = (0..50).map(|k| ((k * 37) % 11) as f64 * 0.3 - 1.0).collect();
    let ys: Vec<f64> = (0..50).map(|k| ((k * 13) % 7) as f64 * 0.2 + 0.5).collect();
    let (v, s) = covariance_with_jackknife(&xs, &ys).unwrap();
    let mut idx: Vec<usize> = (0..50).collect();
    idx.reverse();
    idx.swap(3, 40);
    let px: Vec<f64> = idx.iter().map(|&k| xs[k]).collect();
    let py: Vec<f64> = idx.iter().map(|&k| ys[k]).collect();
    let (pv, ps) = covariance_with_jackknife(&px, &py).unwrap();
    assert!((v - pv).abs() < 1e-13 && (s - ps).abs() < 1e-13);
    let cst = vec![4.0; 50];
    assert_eq!(covariance_with_jackknife(&cst, &ys).unwrap().0, 0.0);
    assert!(covariance_with_jackknife(&xs[..1], &ys[..1]).is_err());
}

#[test]
fn plan_round_trips_and_rejects_unknown_keys() {
    let plan = SimulationPlan {
        model: FieldModel::Vector { pair: bary(&[(1.0, 1.0)], &[]) },
        ell_max: 6,
        points: vec![[0.0, 1.0, 2.0]],
        realizations: 3,
        master_seed: 9,
    };
    let text = serde_json::to_string(&plan).unwrap();
    let back: SimulationPlan = serde_json::from_str(&text).unwrap();
    assert_eq!(back, plan);
    assert_eq!(back.config_hash(), plan.config_hash());
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["extra"] = serde_json::json!(1);
    assert!(serde_json::from_value::<SimulationPlan>(v).is_err());
    let bad = SimulationPlan { realizations: 0, ..plan };
    assert!(simulate(&bad).is_err());
}

#[test]
fn truncated_expansion_matches_linear_algebra() {
    // one realization equals basis · (factor · ξ) assembled by hand
    let pair = bary(&[(0.9, 1.0)], &[]);
    let x = [0.3, 0.1, -0.2];
    let plan = SimulationPlan {
        model: FieldModel::Vector { pair },
        ell_max: 3,
        points: vec![x],
        realizations: 1,
        master_seed: 4,
    };
    let out = simulate_vector(&plan).unwrap();
    let f = psd_factor(&c_coefficients(1, 3).unwrap()).unwrap();
    let mut stream = isofield::simulate::NormalStream::new(4, 0);
    let mut xi = vec![0.0; f.ncols()];
    stream.fill(&mut xi);
    let z = &f * DVector::from_vec(xi);
    let b = basis(x, 0.9, 3);
    let k = lm_count(3);
    for i in 0..3 {
        let want: f64 = (0..k).map(|a| b[a] * z[i * k + a]).sum();
        assert!((out.get(0, 0, i) - want).abs() < 1e-13);
    }
}
