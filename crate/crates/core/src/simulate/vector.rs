//! Truncated spectral synthesis of isotropic vector fields on ℝ³.
//!
//! `T_i(x) = Σ_{n=1,2} Σ_k Σ_{ℓ ≤ L} Σ_m Y^m_ℓ(x̂) j_ℓ(λ_k |x|) Z^m_{niℓ}(λ_k)` with
//! `E[Z^m_{niℓ} Z^{m'}_{n'jℓ'}] = δ_{nn'} C^{mm'}_{nℓℓ'ij} Φ_n({λ_k})`, where
//!
//! `C^{mm'}_{nℓℓ'ij} = 4π i^{ℓ'−ℓ} √((2ℓ+1)(2ℓ'+1)) [ (1/3) δ_ij g^{0[m,m']}_{0[ℓ,ℓ']} g^{0[0,0]}_{0[ℓ,ℓ']}
//!   + κ_n g^{0[0,0]}_{2[ℓ,ℓ']} Σ_k G^k_ij g^{k[m,m']}_{2[ℓ,ℓ']} ]`,
//!
//! `κ₁ = −1/(5√6)`, `κ₂ = √2/(5√3)`, for the barycentric pair.

use super::plan::{FieldModel, FieldRealization, SimulationPlan};
use super::rng::NormalStream;
use super::scalar::radial_harmonic_basis;
use crate::correlation::cartesian::gg_cartesian;
use crate::correlation::VectorSpectralPair;
use crate::coupling::{gg_block, GGBlock};
use crate::error::{Error, Result};
use crate::special_fn::{lm_count, lm_index};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Smallest eigenvalue accepted before projection onto the PSD cone.
pub const PSD_TOL: f64 = 1e-9;

/// Position of `(i, ℓ, m)` inside one `n`-block.
#[inline]
pub fn coefficient_index(ell_max: usize, i: usize, ell: usize, m: i64) -> usize {
    i * lm_count(ell_max) + lm_index(ell, m)
}

fn kappa(n: usize) -> f64 {
    match n {
        1 => -1.0 / (5.0 * 6f64.sqrt()),
        _ => 2f64.sqrt() / (5.0 * 3f64.sqrt()),
    }
}

/// Unit-mass coefficient covariance `C_n` over `(i, ℓ, m)`, of size `3(L+1)²`.
pub fn c_coefficients(n: usize, ell_max: usize) -> Result<DMatrix<f64>> {
    if n != 1 && n != 2 {
        return Err(Error::invalid(format!("measure index must be 1 or 2, got {n}")));
    }
    let mut blocks: HashMap<(usize, usize, usize), GGBlock> = HashMap::new();
    for l in [0usize, 2] {
        for l1 in 0..=ell_max {
            for l2 in 0..=ell_max {
                if l1.abs_diff(l2) <= l && l <= l1 + l2 {
                    blocks.insert((l, l1, l2), gg_block(l, l1, l2)?);
                }
            }
        }
    }
    let g2 = gg_cartesian(2);
    let dim = 3 * lm_count(ell_max);
    let mut c = DMatrix::zeros(dim, dim);
    let k_n = kappa(n);
    for l in 0..=ell_max {
        for lp in 0..=ell_max {
            // every coupling below needs ℓ + ℓ' even, where i^{ℓ'−ℓ} is real
            if (l + lp) % 2 == 1 {
                continue;
            }
            let phase = if ((lp as i64 - l as i64) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let pre = 4.0 * PI * phase * (((2 * l + 1) * (2 * lp + 1)) as f64).sqrt();
            let b0 = blocks.get(&(0, l, lp));
            let b2 = blocks.get(&(2, l, lp));
            for m in -(l as i64)..=(l as i64) {
                for mp in -(lp as i64)..=(lp as i64) {
                    let iso = b0.map_or(0.0, |b| b.get(0, m, mp) * b.get(0, 0, 0) / 3.0);
                    let (quad_w, ks): (f64, [f64; 5]) = match b2 {
                        Some(b) => (k_n * b.get(0, 0, 0), std::array::from_fn(|k| b.get(k as i64 - 2, m, mp))),
                        None => (0.0, [0.0; 5]),
                    };
                    if iso == 0.0 && (quad_w == 0.0 || ks.iter().all(|&v| v == 0.0)) {
                        continue;
                    }
                    for i in 0..3 {
                        for j in 0..3 {
                            let mut quad = 0.0;
                            for (gk, kv) in g2.iter().zip(&ks) {
                                quad += gk[i][j] * kv;
                            }
                            let iso_ij = if i == j { iso } else { 0.0 };
                            let v = pre * (iso_ij + quad_w * quad);
                            if v != 0.0 {
                                c[(coefficient_index(ell_max, i, l, m), coefficient_index(ell_max, j, lp, mp))] = v;
                            }
                        }
                    }
                }
            }
        }
    }
    let asym = (&c - c.transpose()).amax();
    if asym > 1e-12 {
        return Err(Error::numerical(format!("coefficient covariance is not symmetric (deviation {asym:e})")));
    }
    Ok(c)
}

/// Coefficient covariance of one spectral atom over `(n, i, ℓ, m)`.
#[derive(Debug, Clone)]
pub struct VectorCovariance {
    pub lambda: f64,
    pub ell_max: usize,
    /// `(Φ₁({λ}), Φ₂({λ}))` in the barycentric normalization.
    pub masses: [f64; 2],
    /// Block-diagonal matrix `diag(Φ₁ C₁, Φ₂ C₂)` of size `6(L+1)²`.
    pub matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
}

/// Distinct wavenumbers of a pair with their barycentric masses `(λ, Φ₁({λ}), Φ₂({λ}))`.
pub fn pair_atoms(pair: &VectorSpectralPair) -> Result<Vec<(f64, f64, f64)>> {
    let pair = pair.to_barycentric()?;
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    for (n, phi) in [&pair.phi1, &pair.phi2].into_iter().enumerate() {
        for a in phi.atoms() {
            match out.iter_mut().find(|e| e.0 == a.lambda) {
                Some(e) => {
                    if n == 0 {
                        e.1 += a.mass
                    } else {
                        e.2 += a.mass
                    }
                }
                None => out.push(if n == 0 { (a.lambda, a.mass, 0.0) } else { (a.lambda, 0.0, a.mass) }),
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Dense coefficient covariance of atom `atom` (index into [`pair_atoms`]).
pub fn vector_expansion_covariance(pair: &VectorSpectralPair, ell_max: usize, atom: usize) -> Result<VectorCovariance> {
    let atoms = pair_atoms(pair)?;
    let &(lambda, m1, m2) = atoms
        .get(atom)
        .ok_or_else(|| Error::invalid(format!("atom index {atom} out of range ({} atoms)", atoms.len())))?;
    let d = 3 * lm_count(ell_max);
    let mut matrix = DMatrix::zeros(2 * d, 2 * d);
    for (n, mass) in [(1usize, m1), (2, m2)] {
        if mass > 0.0 {
            let c = c_coefficients(n, ell_max)? * mass;
            matrix.view_mut(((n - 1) * d, (n - 1) * d), (d, d)).copy_from(&c);
        }
    }
    let min = min_eigenvalue(&matrix);
    if min < -PSD_TOL {
        return Err(Error::numerical(format!("coefficient covariance has eigenvalue {min:e}")));
    }
    Ok(VectorCovariance { lambda, ell_max, masses: [m1, m2], matrix, min_eigenvalue: min })
}

/// `F` with `F Fᵀ = C` after clamping eigenvalues in `[−PSD_TOL, 0)` to zero.
///
/// Columns are ordered by decreasing eigenvalue and each is signed so that its entry of
/// largest magnitude is positive.
pub fn psd_factor(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if c.nrows() == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(c.clone());
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL {
        return Err(Error::numerical(format!("covariance has eigenvalue {min:e} below tolerance")));
    }
    let mut keep: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    keep.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut f = DMatrix::zeros(c.nrows(), keep.len());
    for (col, &k) in keep.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let pivot = v.iter().fold(0.0f64, |p, &x| if x.abs() > p.abs() { x } else { p });
        let s = eig.eigenvalues[k].sqrt() * pivot.signum();
        f.column_mut(col).copy_from(&(v * s));
    }
    Ok(f)
}

struct AtomTerm {
    /// `√mass · F_n`.
    factor: DMatrix<f64>,
    /// `basis[point]`, values `Y^m_ℓ(x̂) j_ℓ(λ|x|)`.
    basis: Vec<Vec<f64>>,
}

/// Precomputed factors and basis values for repeated sampling at fixed points.
pub struct VectorSampler {
    ell_max: usize,
    terms: Vec<AtomTerm>,
    n_points: usize,
}

impl VectorSampler {
    pub fn new(pair: &VectorSpectralPair, ell_max: usize, points: &[[f64; 3]]) -> Result<Self> {
        let atoms = pair_atoms(pair)?;
        let mut factors: [Option<DMatrix<f64>>; 2] = [None, None];
        let mut terms = Vec::new();
        for (lambda, m1, m2) in atoms {
            let basis: Vec<Vec<f64>> = points.iter().map(|&x| radial_harmonic_basis(x, lambda, ell_max, 1.0)).collect();
            for (n, mass) in [(1usize, m1), (2, m2)] {
                if mass <= 0.0 {
                    continue;
                }
                if factors[n - 1].is_none() {
                    factors[n - 1] = Some(psd_factor(&c_coefficients(n, ell_max)?)?);
                }
                let f = factors[n - 1].as_ref().expect("factor computed above");
                terms.push(AtomTerm { factor: f * mass.sqrt(), basis: basis.clone() });
            }
        }
        Ok(VectorSampler { ell_max, terms, n_points: points.len() })
    }

    /// One realization: `[T_x, T_y, T_z]` at every point.
    pub fn sample(&self, stream: &mut NormalStream) -> Vec<[f64; 3]> {
        let n = lm_count(self.ell_max);
        let mut out = vec![[0.0; 3]; self.n_points];
        for term in &self.terms {
            let mut xi = vec![0.0; term.factor.ncols()];
            stream.fill(&mut xi);
            let z = &term.factor * DVector::from_vec(xi);
            for (p, b) in term.basis.iter().enumerate() {
                for (i, v) in out[p].iter_mut().enumerate() {
                    *v += b.iter().zip(&z.as_slice()[i * n..(i + 1) * n]).map(|(u, w)| u * w).sum::<f64>();
                }
            }
        }
        out
    }
}

/// Realizations of a vector plan; realization `r` uses stream `r` of the master seed.
pub fn simulate_vector(plan: &SimulationPlan) -> Result<FieldRealization> {
    plan.validate()?;
    let FieldModel::Vector { pair } = &plan.model else {
        return Err(Error::invalid(format!("plan kind is {}, expected vector", plan.model.kind())));
    };
    let sampler = VectorSampler::new(pair, plan.ell_max, &plan.points)?;
    let blocks: Vec<Vec<f64>> = (0..plan.realizations)
        .into_par_iter()
        .map(|r| sampler.sample(&mut NormalStream::new(plan.master_seed, r as u64)).into_iter().flatten().collect())
        .collect();
    FieldRealization::from_blocks(plan, blocks)
}
