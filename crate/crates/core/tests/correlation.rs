#![allow(clippy::needless_range_loop)]
// Oracle constants keep every digit of the reference evaluation.
#![allow(clippy::excessive_precision)]

use isofield::correlation::cartesian::{delta, norm3};
use isofield::correlation::fabric::{f2, f4, fabric_tensors};
use isofield::correlation::ogden::OgdenTensor;
use isofield::correlation::radial::RadialFn;
use isofield::correlation::rank2::{combine_l, s_from_k, K_TO_L, LOMAKIN_TO_L};
use isofield::correlation::restrictions::{
    damage_a_from_m, damage_m_from_a, damage_m_from_s, inplane_h_from_t, inplane_tensor, reynolds_energy_corr,
};
use isofield::correlation::*;
use isofield::special_fn::{bessel_j_int, spherical_bessel, QuadratureRule};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(r: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    [r.gen_range(-scale..scale), r.gen_range(-scale..scale), r.gen_range(-scale..scale)]
}

/// Rotation matrix from a random unit quaternion.
fn random_rotation(r: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let mut q = [0.0f64; 4];
    loop {
        for c in q.iter_mut() {
            *c = r.gen_range(-1.0..1.0);
        }
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n < 1.0 {
            q.iter_mut().for_each(|c| *c /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn rotate(g: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| g[i][k] * v[k]).sum();
    }
    out
}

fn mixed_pair() -> VectorSpectralPair {
    VectorSpectralPair::new(
        SpectralMeasure::from_pairs(&[(0.7, 0.4), (1.9, 1.1)]).unwrap(),
        SpectralMeasure::from_pairs(&[(0.3, 0.8), (1.2, 0.5)]).unwrap(),
        Normalization::Barycentric,
    )
    .unwrap()
}

// scalar kernel

#[test]
fn scalar_corr_at_origin_is_total_mass() {
    let phi = SpectralMeasure::from_pairs(&[(0.0, 0.3), (1.0, 0.5), (4.0, 1.2)]).unwrap();
    for d in 2..=6 {
        assert!((scalar_corr(0.0, &phi, d).unwrap() - 2.0).abs() < 1e-14);
    }
}

#[test]
fn scalar_corr_three_dimensions_is_j0() {
    let phi = SpectralMeasure::single(1.0, 2.5).unwrap();
    for r in [0.1, 0.5, 1.0, 3.0, 7.5, 20.0] {
        let want = 2.5 * spherical_bessel(0, r);
        assert!((scalar_corr(r, &phi, 3).unwrap() - want).abs() < 1e-14);
    }
}

#[test]
fn scalar_corr_two_dimensions_is_j0_cylindrical() {
    // J₀(2) from mpmath.besselj(0, 2)
    let j0_2 = 0.22389077914123566805;
    let phi = SpectralMeasure::single(2.0, 1.5).unwrap();
    assert!((scalar_corr(1.0, &phi, 2).unwrap() - 1.5 * j0_2).abs() < 1e-14);
    assert!((bessel_j_int(0, 2.0) - j0_2).abs() < 1e-15);
}

#[test]
fn scalar_corr_matrix_is_positive_semidefinite() {
    let mut r = rng(11);
    let phi = SpectralMeasure::from_pairs(&[(0.0, 0.2), (0.5, 1.0), (2.0, 0.7), (5.0, 0.3)]).unwrap();
    for d in [2usize, 3, 4, 5] {
        let pts: Vec<[f64; 3]> = (0..20).map(|_| random_vec(&mut r, 2.0)).collect();
        let m = DMatrix::from_fn(20, 20, |i, j| {
            let sep = [pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]];
            scalar_corr(norm3(sep), &phi, d).unwrap()
        });
        let min = SymmetricEigen::new(m).eigenvalues.min();
        assert!(min >= -1e-9, "d = {d}: min eigenvalue {min}");
    }
}

#[test]
fn spectral_measure_validation() {
    assert!(SpectralMeasure::from_pairs(&[(1.0, 1.0), (0.5, 1.0)]).is_err());
    assert!(SpectralMeasure::from_pairs(&[(1.0, -1.0)]).is_err());
    assert!(SpectralMeasure::from_pairs(&[(-1.0, 1.0)]).is_err());
    let bad = VectorSpectralPair::new(
        SpectralMeasure::single(0.0, 1.0).unwrap(),
        SpectralMeasure::single(0.0, 1.0).unwrap(),
        Normalization::Barycentric,
    );
    assert!(bad.is_err());
    let good = VectorSpectralPair::new(
        SpectralMeasure::single(0.0, 2.0).unwrap(),
        SpectralMeasure::single(0.0, 1.0).unwrap(),
        Normalization::Barycentric,
    );
    assert!(good.is_ok());
    let yaglom = VectorSpectralPair::new(
        SpectralMeasure::single(0.0, 1.0).unwrap(),
        SpectralMeasure::single(0.0, 1.0).unwrap(),
        Normalization::Yaglom,
    );
    assert!(yaglom.is_ok());
}

#[test]
fn spectral_measure_json_rejects_unknown_keys() {
    let ok: SpectralMeasure = serde_json::from_str(r#"[{"lambda": 1.0, "mass": 2.0}]"#).unwrap();
    assert_eq!(ok.total_mass(), 2.0);
    let err = serde_json::from_str::<SpectralMeasure>(r#"[{"lambda": 1.0, "mas": 2.0}]"#).unwrap_err();
    assert!(err.to_string().contains("mas"));
}

// vector kernel

#[test]
fn vector_corr_origin_single_atom() {
    let pair = VectorSpectralPair::new(
        SpectralMeasure::single(1.0, 1.0).unwrap(),
        SpectralMeasure::empty(),
        Normalization::Barycentric,
    )
    .unwrap();
    let t = vector_corr([0.0; 3], &pair).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            assert!((t[a][b] - delta(a, b) / 3.0).abs() < 1e-15);
        }
    }
}

#[test]
fn vector_corr_origin_is_mass_weighted_identity() {
    let pair = mixed_pair();
    let t = vector_corr([0.0; 3], &pair).unwrap();
    let want = pair.total_mass() / 3.0;
    for a in 0..3 {
        for b in 0..3 {
            assert!((t[a][b] - want * delta(a, b)).abs() < 1e-14);
        }
    }
}

#[test]
fn vector_corr_axial_is_diagonal_with_equal_lateral_entries() {
    let pair = mixed_pair();
    for r in [0.2, 1.0, 2.7, 6.0] {
        let t = vector_corr([r, 0.0, 0.0], &pair).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!(t[a][b].abs() < 1e-15);
                }
            }
        }
        assert!((t[1][1] - t[2][2]).abs() < 1e-15);
        let y = vector_corr_yaglom([r, 0.0, 0.0], &pair).unwrap();
        let (bll, bkk) = yaglom_longitudinal_transverse(r, &pair.to_yaglom().unwrap()).unwrap();
        assert!((y[0][0] - bll).abs() < 1e-15 && (y[1][1] - bkk).abs() < 1e-15);
    }
}

#[test]
fn vector_routes_agree_at_random_separations() {
    let mut r = rng(21);
    let pair = mixed_pair();
    for _ in 0..100 {
        let v = random_vec(&mut r, 4.0);
        let a = vector_corr(v, &pair).unwrap();
        let b = vector_corr_yaglom(v, &pair).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-10, "{v:?} ({i},{j})");
            }
        }
    }
}

#[test]
fn vector_corr_is_rotation_covariant() {
    let mut r = rng(22);
    let pair = mixed_pair();
    for _ in 0..50 {
        let v = random_vec(&mut r, 3.0);
        let g = random_rotation(&mut r);
        let lhs = vector_corr(rotate(&g, v), &pair).unwrap();
        let t = vector_corr(v, &pair).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut rhs = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        rhs += g[i][a] * g[j][b] * t[a][b];
                    }
                }
                assert!((lhs[i][j] - rhs).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn vector_corr_symmetric_under_index_and_sign_swap() {
    let mut r = rng(23);
    let pair = mixed_pair();
    for _ in 0..20 {
        let v = random_vec(&mut r, 3.0);
        let a = vector_corr(v, &pair).unwrap();
        let b = vector_corr(v.map(|c| -c), &pair).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[j][i]).abs() < 1e-14);
            }
        }
    }
}

// longitudinal and lateral functions

fn solenoidal_pair() -> VectorSpectralPair {
    VectorSpectralPair::new(
        SpectralMeasure::from_pairs(&[(0.8, 1.0), (2.1, 0.6)]).unwrap(),
        SpectralMeasure::empty(),
        Normalization::Barycentric,
    )
    .unwrap()
}

fn irrotational_pair() -> VectorSpectralPair {
    VectorSpectralPair::new(
        SpectralMeasure::empty(),
        SpectralMeasure::from_pairs(&[(0.8, 1.0), (2.1, 0.6)]).unwrap(),
        Normalization::Barycentric,
    )
    .unwrap()
}

fn fg_table(pair: &VectorSpectralPair) -> (RadialFn, RadialFn) {
    let rs: Vec<f64> = (0..=2000).map(|k| k as f64 * 0.005).collect();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for &r in &rs {
        let (a, b) = longitudinal_lateral(|v| vector_corr(v, pair), r).unwrap();
        f.push(a);
        g.push(b);
    }
    (RadialFn::Table(CubicTable::new(rs.clone(), f).unwrap()), RadialFn::Table(CubicTable::new(rs, g).unwrap()))
}

#[test]
fn longitudinal_lateral_at_origin() {
    assert_eq!(longitudinal_lateral(|v| vector_corr(v, &mixed_pair()), 0.0).unwrap(), (1.0, 1.0));
    let zero = VectorSpectralPair::new(SpectralMeasure::empty(), SpectralMeasure::empty(), Normalization::Barycentric)
        .unwrap();
    assert!(longitudinal_lateral(|v| vector_corr(v, &zero), 1.0).is_err());
}

#[test]
fn solenoidal_kernel_satisfies_f_g_relation() {
    let pair = solenoidal_pair();
    for r in [0.3, 1.0, 2.5, 4.0] {
        let (f_r, g_r) = longitudinal_lateral(|v| vector_corr(v, &pair), r).unwrap();
        let h = 1e-5 * r.max(1.0);
        let f_plus = longitudinal_lateral(|v| vector_corr(v, &pair), r + h).unwrap().0;
        let f_minus = longitudinal_lateral(|v| vector_corr(v, &pair), r - h).unwrap().0;
        let fp = (f_plus - f_minus) / (2.0 * h);
        assert!((g_r - (f_r + r * fp / 2.0)).abs() < 1e-8, "r = {r}");
    }
    let (ft, gt) = fg_table(&pair);
    let g_from_f = solenoidal_g_from_f(ft, 3);
    for r in [0.5, 1.5, 3.0] {
        assert!((g_from_f.eval(r) - gt.eval(r)).abs() < 1e-6);
    }
}

#[test]
fn irrotational_kernel_satisfies_f_g_relation() {
    let pair = irrotational_pair();
    for r in [0.3, 1.0, 2.5, 4.0] {
        let (f_r, g_r) = longitudinal_lateral(|v| vector_corr(v, &pair), r).unwrap();
        let h = 1e-5 * r.max(1.0);
        let g_plus = longitudinal_lateral(|v| vector_corr(v, &pair), r + h).unwrap().1;
        let g_minus = longitudinal_lateral(|v| vector_corr(v, &pair), r - h).unwrap().1;
        let gp = (g_plus - g_minus) / (2.0 * h);
        assert!((f_r - (g_r + r * gp)).abs() < 1e-8, "r = {r}");
    }
}

#[test]
fn single_atom_shapes_match_bessel_forms() {
    // solenoidal atom: f = 3 j₁(u)/u, g = (3/2)(j₀ − j₁/u), normalised at the origin
    let lambda = 1.3;
    let pair = VectorSpectralPair::new(
        SpectralMeasure::single(lambda, 1.0).unwrap(),
        SpectralMeasure::empty(),
        Normalization::Barycentric,
    )
    .unwrap();
    for r in [0.4, 1.1, 3.3] {
        let u = lambda * r;
        let j0 = spherical_bessel(0, u);
        let j1 = spherical_bessel(1, u);
        let (f, g) = longitudinal_lateral(|v| vector_corr(v, &pair), r).unwrap();
        assert!((f - 3.0 * j1 / u).abs() < 1e-12);
        assert!((g - 1.5 * (j0 - j1 / u)).abs() < 1e-12);
    }
}

#[test]
fn solenoidal_gaussian_closed_form() {
    let f = RadialFn::Gaussian { scale: 1.0, length: 1.0 };
    let g = solenoidal_g_from_f(f, 3);
    for k in 0..=50 {
        let r = k as f64 * 0.1;
        let want = (1.0 - r * r) * (-r * r).exp();
        assert!((g.eval(r) - want).abs() < 1e-8, "r = {r}");
    }
    let c = solenoidal_g_from_f(RadialFn::Constant { value: 1.0 }, 3);
    assert!((c.eval(2.0) - 1.0).abs() < 1e-15);
}

#[test]
fn irrotational_exponential_closed_form() {
    let g = RadialFn::Exponential { scale: 1.0, length: 1.0 };
    let f = irrotational_f_from_g(g);
    for k in 0..=50 {
        let r = k as f64 * 0.1;
        let want = (1.0 - r) * (-r).exp();
        assert!((f.eval(r) - want).abs() < 1e-8, "r = {r}");
    }
    let c = irrotational_f_from_g(RadialFn::Constant { value: 3.5 });
    assert!((c.eval(1.0) - 3.5).abs() < 1e-15);
}

#[test]
fn two_dimensional_solenoidal_mirrors_irrotational() {
    let base = RadialFn::Gaussian { scale: 0.7, length: 1.4 };
    let a = solenoidal_g_from_f(base.clone(), 2);
    let b = irrotational_f_from_g(base);
    for k in 0..=50 {
        let r = k as f64 * 0.1;
        assert!((a.eval(r) - b.eval(r)).abs() < 1e-15);
    }
}

#[test]
fn restriction_inverses_round_trip_on_zero_to_five() {
    let f = RadialFn::Gaussian { scale: 1.0, length: 1.0 };
    let g = solenoidal_g_from_f(f.clone(), 3);
    let back = RadialFn::SolenoidalF { g: Box::new(g), n: 3 };
    let g2 = RadialFn::Exponential { scale: 1.0, length: 1.0 };
    let f2 = irrotational_f_from_g(g2.clone());
    let back2 = RadialFn::IrrotationalG { f: Box::new(f2) };
    for k in 0..=100 {
        let r = k as f64 * 0.05;
        assert!((back.eval(r) - f.eval(r)).abs() < 1e-8, "solenoidal r = {r}");
        assert!((back2.eval(r) - g2.eval(r)).abs() < 1e-8, "irrotational r = {r}");
    }
}

#[test]
fn radial_fn_json_round_trip() {
    let spec =
        r#"{"kind": "solenoidal_g", "f": {"kind": "table", "r": [0.0, 1.0, 2.0], "value": [1.0, 0.5, 0.1]}, "n": 3}"#;
    let f: RadialFn = serde_json::from_str(spec).unwrap();
    let text = serde_json::to_string(&f).unwrap();
    let again: RadialFn = serde_json::from_str(&text).unwrap();
    assert_eq!(f, again);
    assert!(serde_json::from_str::<RadialFn>(r#"{"kind": "gaussian", "scale": 1.0}"#).is_err());
}

// rank-two kernels

fn k_kernel(k: [f64; 5]) -> RadialKernelSet {
    RadialKernelSet::new(KernelBasis::KRank2, k.iter().map(|&v| RadialFn::Constant { value: v }).collect()).unwrap()
}

#[test]
fn k_basis_diagonal_autocorrelation() {
    let k = [0.9, -0.4, 0.3, 0.25, -0.6];
    let set = k_kernel(k);
    for r1 in [0.5, 1.0, 2.0] {
        let t = rank2_corr([r1, 0.0, 0.0], &set).unwrap();
        let want = k[0] + 2.0 * k[1] + 2.0 * r1 * r1 * k[2] + 4.0 * r1 * r1 * k[3] + r1.powi(4) * k[4];
        assert!((t[0][0][0][0] - want).abs() < 1e-14);
    }
}

#[test]
fn k_basis_mixed_component_vanishes_on_axis() {
    let set = k_kernel([0.9, -0.4, 0.3, 0.25, -0.6]);
    let t = rank2_corr([1.7, 0.0, 0.0], &set).unwrap();
    assert!(t[0][0][0][1].abs() < 1e-15);
    assert!(t[0][0][1][2].abs() < 1e-15);
    let off = rank2_corr([1.1, 0.8, 0.0], &set).unwrap();
    assert!(off[0][0][0][1].abs() > 1e-3);
}

#[test]
fn rank2_index_symmetries_and_rotation_law() {
    let mut r = rng(31);
    let c = |v| RadialFn::Gaussian { scale: v, length: 1.3 };
    let lomakin = RadialKernelSet::new(
        KernelBasis::LRank2Lomakin,
        vec![
            c(0.5),
            RadialFn::Exponential { scale: 1.0, length: 2.0 },
            c(0.7),
            c(-0.3),
            c(0.2),
            RadialFn::Exponential { scale: 0.5, length: 2.0 },
        ],
    );
    // P₂ = P₄ + 2P₆ fails for these, so pick P₄ to satisfy it
    assert!(lomakin.is_err());
    let set =
        RadialKernelSet::new(KernelBasis::LRank2Lomakin, vec![c(0.5), c(1.0), c(0.7), c(0.4), c(0.2), c(0.3)]).unwrap();
    for _ in 0..20 {
        let v = random_vec(&mut r, 2.0);
        let g = random_rotation(&mut r);
        let t = rank2_corr(v, &set).unwrap();
        let tr = rank2_corr(rotate(&g, v), &set).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert!((t[i][j][k][l] - t[j][i][k][l]).abs() < 1e-15);
                        assert!((t[i][j][k][l] - t[i][j][l][k]).abs() < 1e-15);
                        let mut rot = 0.0;
                        for a in 0..3 {
                            for b in 0..3 {
                                for cc in 0..3 {
                                    for d in 0..3 {
                                        rot += g[i][a] * g[j][b] * g[k][cc] * g[l][d] * t[a][b][cc][d];
                                    }
                                }
                            }
                        }
                        assert!((tr[i][j][k][l] - rot).abs() < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn locally_isotropic_field_uses_only_the_first_channel() {
    // T_ij = T δ_ij with ⟨T(0), T(r)⟩ = C(r)
    let c = 0.83;
    let mut t = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            t[i][i][k][k] = c;
        }
    }
    let (coef, resid) = decompose_l(&t, [0.3, 1.1, -0.4]);
    assert!(resid < 1e-13);
    assert!((coef[0] - c).abs() < 1e-12);
    for q in coef.iter().skip(1) {
        assert!(q.abs() < 1e-12);
    }
}

#[test]
fn conversion_constants_regression() {
    assert_eq!(
        LOMAKIN_TO_L,
        [
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
            [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
            [1.0, 1.0, -2.0, 0.0, -4.0, 0.0],
        ]
    );
    assert_eq!(
        K_TO_L,
        [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    );
    // the constants reproduce component-level definitions of the bases
    let mut r = rng(32);
    for _ in 0..20 {
        let v = random_vec(&mut r, 2.0);
        let k: [f64; 5] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let t = rank2_corr(v, &k_kernel(k)).unwrap();
        let (coef, resid) = decompose_l(&t, v);
        assert!(resid < 1e-12);
        let want = [k[0], k[1], k[3], k[2], k[4]];
        for q in 0..5 {
            assert!((coef[q] - want[q]).abs() < 1e-10);
        }
        // S basis on the unit vector carries the r-powers of the K basis
        let d = norm3(v);
        let s = s_from_k(k, d);
        let s_set =
            RadialKernelSet::new(KernelBasis::SDamage, s.iter().map(|&x| RadialFn::Constant { value: x }).collect())
                .unwrap();
        let ts = rank2_corr(v, &s_set).unwrap();
        for (a, b) in ts.iter().flatten().flatten().flatten().zip(t.iter().flatten().flatten().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn lomakin_components_match_the_listed_form() {
    let p = [0.5, 1.0, 0.7, 0.4, 0.2, 0.3];
    let set =
        RadialKernelSet::new(KernelBasis::LRank2Lomakin, p.iter().map(|&v| RadialFn::Constant { value: v }).collect())
            .unwrap();
    let t = rank2_corr([1.0, 0.0, 0.0], &set).unwrap();
    let l = [p[3], p[5], p[4] - p[5], p[2] - p[3], p[0] + p[1] - 2.0 * p[2] - 4.0 * p[4]];
    let direct = combine_l(&l, [1.0, 0.0, 0.0]);
    assert_eq!(t, direct);
    // ⟨T₁₁,T₁₁⟩ = P₁, ⟨T₂₂,T₂₂⟩ = P₂, ⟨T₁₁,T₂₂⟩ = P₃, ⟨T₂₂,T₃₃⟩ = P₄, ⟨T₁₂,T₁₂⟩ = P₅, ⟨T₂₃,T₂₃⟩ = P₆
    assert!((t[0][0][0][0] - p[0]).abs() < 1e-15);
    assert!((t[1][1][1][1] - p[1]).abs() < 1e-15);
    assert!((t[0][0][1][1] - p[2]).abs() < 1e-15);
    assert!((t[1][1][2][2] - p[3]).abs() < 1e-15);
    assert!((t[0][1][0][1] - p[4]).abs() < 1e-15);
    assert!((t[1][2][1][2] - p[5]).abs() < 1e-15);
}

// component relations

#[test]
fn inplane_round_trip() {
    let mut r = rng(41);
    for _ in 0..200 {
        let h: [f64; 4] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let d = r.gen_range(0.2..3.0);
        let t = inplane_tensor([d, 0.0], h);
        let back = inplane_h_from_t(t[0][0][0][0], t[1][1][1][1], t[0][0][1][1], t[0][1][0][1], d).unwrap();
        for q in 0..4 {
            assert!((back[q] - h[q]).abs() < 1e-12 * (1.0 + h[q].abs()), "{h:?} {back:?}");
        }
    }
}

#[test]
fn inplane_locally_isotropic_and_passthrough() {
    let c = 1.7;
    let h = inplane_h_from_t(c, c, c, 0.0, 1.3).unwrap();
    assert_eq!(h, [c, 0.0, 0.0, 0.0]);
    let h = inplane_h_from_t(0.3, 0.2, 0.1, 0.45, 2.0).unwrap();
    assert_eq!(h[1], 0.45);
    assert!(inplane_h_from_t(1.0, 1.0, 1.0, 0.0, 0.0).is_err());
}

#[test]
fn reynolds_read_off() {
    assert_eq!(reynolds_energy_corr([1.0, 0.0, 0.0, 0.0, 0.0]), 2.25);
    assert_eq!(reynolds_energy_corr([0.0; 5]), 0.0);
    assert_eq!(reynolds_energy_corr([0.0, 0.0, 0.0, 0.0, 1.0]), 0.25);
}

#[test]
fn reynolds_matches_trace_contraction() {
    let mut r = rng(42);
    for _ in 0..100 {
        let s: [f64; 5] = std::array::from_fn(|_| r.gen_range(-3.0..3.0));
        let v = random_vec(&mut r, 2.0);
        let set =
            RadialKernelSet::new(KernelBasis::SDamage, s.iter().map(|&x| RadialFn::Constant { value: x }).collect())
                .unwrap();
        let t = rank2_corr(v, &set).unwrap();
        let mut trace = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                trace += t[i][i][k][k];
            }
        }
        assert!((0.25 * trace - reynolds_energy_corr(s)).abs() < 1e-12);
    }
}

#[test]
fn damage_read_off_and_residual() {
    let d = damage_a_from_m([0.0, 0.0, 0.0, 1.0, 0.0, 0.5]);
    assert_eq!(d.a, [1.0, 0.5, -1.0, -0.5, 1.0]);
    assert_eq!(d.residual, -2.0);
    let ok = damage_a_from_m([0.3, 2.0, 0.1, 1.0, 0.2, 0.5]);
    assert_eq!(ok.residual, 0.0);
}

#[test]
fn damage_round_trip_is_exact() {
    let mut r = rng(43);
    for _ in 0..200 {
        let a: [f64; 5] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let m = damage_m_from_a(a);
        let back = damage_a_from_m(m);
        for q in 0..5 {
            assert!((back.a[q] - a[q]).abs() < 1e-14);
        }
        assert!(back.residual.abs() < 1e-14);
    }
}

#[test]
fn damage_components_from_assembled_kernel() {
    let mut r = rng(44);
    for _ in 0..20 {
        let s: [f64; 5] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let d = r.gen_range(0.1..3.0);
        let set =
            RadialKernelSet::new(KernelBasis::SDamage, s.iter().map(|&x| RadialFn::Constant { value: x }).collect())
                .unwrap();
        let t = rank2_corr([d, 0.0, 0.0], &set).unwrap();
        let m = damage_m_from_s(s);
        let read =
            [t[0][0][0][0], t[1][1][1][1], t[0][0][1][1], t[1][1][2][2], t[0][1][0][1], t[1][2][1][2], t[0][0][0][1]];
        for q in 0..7 {
            assert!((m[q] - read[q]).abs() < 1e-13, "M{} {} vs {}", q + 1, m[q], read[q]);
        }
        let a = damage_a_from_m([m[0], m[1], m[2], m[3], m[4], m[5]]);
        assert!(a.residual.abs() < 1e-13);
        assert!((a.a[0] - s[0]).abs() < 1e-13);
        assert!((a.a[1] - s[1]).abs() < 1e-13);
        assert!((a.a[2] - s[2]).abs() < 1e-13);
        assert!((a.a[3] - s[3]).abs() < 1e-13);
        assert!((a.a[4] - (s[2] + s[4])).abs() < 1e-13);
    }
}

// Ogden tensors

#[test]
fn ogden_low_ranks() {
    let i2 = OgdenTensor::new(2).unwrap();
    let i4 = OgdenTensor::new(4).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(i2.get(&[a, b]), delta(a, b));
            for c in 0..3 {
                for d in 0..3 {
                    let want = 0.5 * (delta(a, c) * delta(b, d) + delta(a, d) * delta(b, c));
                    assert_eq!(i4.get(&[a, b, c, d]), want);
                }
            }
        }
    }
    assert!(OgdenTensor::new(3).is_err());
    assert!(OgdenTensor::new(8).is_err());
}

#[test]
fn ogden_rank_six_recursion_and_symmetry() {
    let i4 = OgdenTensor::new(4).unwrap();
    let i6 = OgdenTensor::new(6).unwrap();
    let idx = |n: usize| -> [usize; 6] { std::array::from_fn(|k| (n / 3usize.pow(5 - k as u32)) % 3) };
    for n in 0..729 {
        let i = idx(n);
        // ν = 2: ½ Σ_p [I_{i₁ p i₃ i₄} I_{p i₂ i₅ i₆} + I_{i₁ p i₅ i₆} I_{p i₂ i₃ i₄}]
        let mut want = 0.0;
        for p in 0..3 {
            want += i4.get(&[i[0], p, i[2], i[3]]) * i4.get(&[p, i[1], i[4], i[5]]);
            want += i4.get(&[i[0], p, i[4], i[5]]) * i4.get(&[p, i[1], i[2], i[3]]);
        }
        want *= 0.5;
        assert!((i6.get(&i) - want).abs() < 1e-15, "{i:?}");
        // symmetric within each index pair
        let swapped = [i[1], i[0], i[2], i[3], i[4], i[5]];
        assert!((i6.get(&i) - i6.get(&swapped)).abs() < 1e-15);
    }
}

// fabric tensors

fn sphere_samples(p: impl Fn([f64; 3]) -> f64) -> Vec<([f64; 3], f64)> {
    let q = QuadratureRule::new(8);
    q.nodes.iter().zip(&q.weights).map(|(pt, w)| (pt.to_cartesian(), w * p(pt.to_cartesian()))).collect()
}

#[test]
fn fabric_uniform_density() {
    let f = fabric_tensors(&sphere_samples(|_| 1.0)).unwrap();
    assert!((f.d0 - 1.0).abs() < 1e-13);
    for v in f.d2.iter().flatten() {
        assert!(v.abs() < 1e-13);
    }
    for v in f.d4.iter().flatten().flatten().flatten() {
        assert!(v.abs() < 1e-13);
    }
    assert!(fabric_tensors(&[]).is_err());
}

#[test]
fn fabric_axial_perturbation() {
    let (eps, eta) = (0.3, 0.2);
    let f = fabric_tensors(&sphere_samples(|n| 1.0 + eps * f2(n)[2][2] + eta * f4(n)[2][2][2][2])).unwrap();
    let want = [-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
    for i in 0..3 {
        for j in 0..3 {
            let w = if i == j { eps * want[i] } else { 0.0 };
            assert!((f.d2[i][j] - w).abs() < 1e-13, "({i},{j}) {}", f.d2[i][j]);
        }
    }
    assert!((f.d0 - 1.0).abs() < 1e-13);
    // degree-two terms do not reach the fourth-order tensor; 8/35 from an mpmath quadrature
    assert!((f.d4[2][2][2][2] - eta * 8.0 / 35.0).abs() < 1e-13);
    let only_eps = fabric_tensors(&sphere_samples(|n| 1.0 + eps * f2(n)[2][2])).unwrap();
    assert!(only_eps.d4.iter().flatten().flatten().flatten().all(|v| v.abs() < 1e-13));
    let trace: f64 = (0..3).map(|i| f.d2[i][i]).sum();
    assert!(trace.abs() < 1e-14);
}

// M-functions in the L-basis

#[test]
fn m_to_l_identities_at_random_separations() {
    let mut r = rng(51);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = random_vec(&mut r, 3.0);
        for g in rank1_identity_gap(v).into_iter().chain(rank2_identity_gap(v)) {
            worst = worst.max(g);
        }
    }
    assert!(worst < 1e-10, "worst gap {worst}");
}

#[test]
fn m_functions_vanish_at_origin_when_weighted() {
    let ids = rank2_identities([0.0; 3]);
    for (n, m) in ids.m_side.iter().enumerate() {
        if m_to_l::RANK2_DEGREES[n] > 0 {
            assert!(m.iter().flatten().flatten().flatten().all(|x| x.abs() < 1e-15));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scalar_corr_bounded_by_mass(r in 0.0f64..50.0, lambda in 0.0f64..10.0, mass in 0.01f64..5.0, d in 2usize..7) {
        let phi = SpectralMeasure::single(lambda, mass).unwrap();
        let v = scalar_corr(r, &phi, d).unwrap();
        prop_assert!(v.abs() <= mass * (1.0 + 1e-12));
    }

    #[test]
    fn normalization_conversion_round_trips(m1 in 0.01f64..3.0, m2 in 0.01f64..3.0, l1 in 0.1f64..4.0, l2 in 0.1f64..4.0) {
        let pair = VectorSpectralPair::new(
            SpectralMeasure::single(l1, m1).unwrap(),
            SpectralMeasure::single(l2, m2).unwrap(),
            Normalization::Yaglom,
        ).unwrap();
        let back = pair.to_barycentric().unwrap().to_yaglom().unwrap();
        prop_assert!((back.phi1.total_mass() - m1).abs() < 1e-14);
        prop_assert!((back.phi2.total_mass() - m2).abs() < 1e-14);
    }

    #[test]
    fn damage_inverse_is_exact(a in proptest::array::uniform5(-5.0f64..5.0)) {
        let back = damage_a_from_m(damage_m_from_a(a));
        for q in 0..5 {
            prop_assert!((back.a[q] - a[q]).abs() < 1e-13);
        }
    }
}
