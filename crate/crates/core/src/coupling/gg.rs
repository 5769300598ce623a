//! Godunov–Gordienko coefficients: Clebsch–Gordan coupling rewritten in the real
//! harmonic bases, and the real Gaunt integral.
//!
//! With `U` the unitary matrix of [`complex_to_real_matrix`],
//!
//! `g^{m[m₁,m₂]}_{ℓ[ℓ₁,ℓ₂]} ∝ Σ U^{ℓ}_{mμ} (U^{ℓ₁}_{m₁μ₁})* (U^{ℓ₂}_{m₂μ₂})* ⟨ℓ₁μ₁ℓ₂μ₂|ℓμ⟩`.
//!
//! The sum is real when `ℓ₁+ℓ₂+ℓ` is even and purely imaginary when it is odd; the
//! non-vanishing part is kept. Each block carries one free sign, fixed for `ℓ₁ ≤ ℓ₂` by
//! making `g^{0[0,0]}` positive when `ℓ₁+ℓ₂+ℓ` is even (where it never vanishes) and
//! otherwise the lexicographically largest non-zero `(m, m₁, m₂)` entry positive; for
//! `ℓ₁ > ℓ₂` the swap law `g^{m[m₁,m₂]}_{ℓ[ℓ₁,ℓ₂]} = (−1)^{ℓ₁+ℓ₂−ℓ} g^{m[m₂,m₁]}_{ℓ[ℓ₂,ℓ₁]}`
//! applies.

use super::cg::clebsch_gordan;
use crate::error::{Error, Result};
use crate::special_fn::complex_to_real_matrix;
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

/// Entries below this magnitude count as structural zeros when fixing signs.
const ZERO_TOL: f64 = 1e-13;
/// Largest tolerated magnitude of the discarded real/imaginary part.
const PART_TOL: f64 = 1e-12;

const CACHE_MAGIC: &[u8; 8] = b"ISOFGG01";
const CACHE_VERSION: u32 = 1;

fn triangle(l1: usize, l2: usize, l: usize) -> bool {
    l >= l1.abs_diff(l2) && l <= l1 + l2
}

/// Dense `(m, m₁, m₂)` block of one triple `(ℓ, ℓ₁, ℓ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GGBlock {
    pub ell: usize,
    pub ell1: usize,
    pub ell2: usize,
    values: Vec<f64>,
}

impl GGBlock {
    #[inline]
    fn offset(&self, m: i64, m1: i64, m2: i64) -> usize {
        let n1 = 2 * self.ell1 + 1;
        let n2 = 2 * self.ell2 + 1;
        let c = (m + self.ell as i64) as usize;
        let a = (m1 + self.ell1 as i64) as usize;
        let b = (m2 + self.ell2 as i64) as usize;
        (c * n1 + a) * n2 + b
    }

    pub fn get(&self, m: i64, m1: i64, m2: i64) -> f64 {
        if m.unsigned_abs() as usize > self.ell
            || m1.unsigned_abs() as usize > self.ell1
            || m2.unsigned_abs() as usize > self.ell2
        {
            return 0.0;
        }
        self.values[self.offset(m, m1, m2)]
    }

    /// The `(2ℓ₁+1) × (2ℓ₂+1)` matrix `g^{m[·,·]}` for a fixed outer order `m`.
    pub fn slice(&self, m: i64) -> Vec<Vec<f64>> {
        let l1 = self.ell1 as i64;
        let l2 = self.ell2 as i64;
        (-l1..=l1).map(|m1| (-l2..=l2).map(|m2| self.get(m, m1, m2)).collect()).collect()
    }
}

/// `[m, −m]` and how many of them are distinct.
fn signed_pair(m: i64) -> ([i64; 2], usize) {
    ([m, -m], if m == 0 { 1 } else { 2 })
}

/// Raw block before the sign choice, for `ℓ₁ ≤ ℓ₂` or any order.
fn raw_block(l: usize, l1: usize, l2: usize) -> Result<Vec<f64>> {
    let (n, n1, n2) = (2 * l + 1, 2 * l1 + 1, 2 * l2 + 1);
    let mut out = vec![0.0; n * n1 * n2];
    if !triangle(l1, l2, l) {
        return Ok(out);
    }
    let u = complex_to_real_matrix(l);
    let u1 = complex_to_real_matrix(l1);
    let u2 = complex_to_real_matrix(l2);
    let odd = (l + l1 + l2) % 2 == 1;
    let (li, l1i, l2i) = (l as i64, l1 as i64, l2 as i64);
    for m in -li..=li {
        for m1 in -l1i..=l1i {
            for m2 in -l2i..=l2i {
                let mut acc = Complex64::new(0.0, 0.0);
                let (p1, n_p1) = signed_pair(m1);
                let (p2, n_p2) = signed_pair(m2);
                for &mu1 in &p1[..n_p1] {
                    for &mu2 in &p2[..n_p2] {
                        let mu = mu1 + mu2;
                        if mu.abs() > li {
                            continue;
                        }
                        let c = clebsch_gordan(l1, mu1, l2, mu2, l, mu);
                        if c == 0.0 {
                            continue;
                        }
                        acc += u[(m + li) as usize][(mu + li) as usize]
                            * u1[(m1 + l1i) as usize][(mu1 + l1i) as usize].conj()
                            * u2[(m2 + l2i) as usize][(mu2 + l2i) as usize].conj()
                            * c;
                    }
                }
                let (keep, drop) = if odd { (acc.im, acc.re) } else { (acc.re, acc.im) };
                if drop.abs() > PART_TOL {
                    return Err(Error::numerical(format!(
                        "coupling ({l};{l1},{l2}) entry ({m};{m1},{m2}) has residual part {drop:e}"
                    )));
                }
                out[(((m + li) as usize) * n1 + (m1 + l1i) as usize) * n2 + (m2 + l2i) as usize] = keep;
            }
        }
    }
    Ok(out)
}

fn fix_sign(values: &mut [f64], l: usize, l1: usize, l2: usize) {
    let centre = ((l * (2 * l1 + 1) + l1) * (2 * l2 + 1)) + l2;
    let pivot = if (l + l1 + l2).is_multiple_of(2) {
        Some(values[centre])
    } else {
        // the flat layout is lexicographic in (m, m1, m2), so the last non-zero entry is the maximum
        values.iter().rev().find(|v| v.abs() > ZERO_TOL).copied()
    };
    if let Some(v) = pivot {
        if v < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Computes the signed block of a single triple.
pub fn gg_block(l: usize, l1: usize, l2: usize) -> Result<GGBlock> {
    let values = if l1 <= l2 {
        let mut v = raw_block(l, l1, l2)?;
        fix_sign(&mut v, l, l1, l2);
        v
    } else {
        let base = gg_block(l, l2, l1)?;
        let sign = if (l1 + l2 + l).is_multiple_of(2) { 1.0 } else { -1.0 };
        let (n, n1, n2) = (2 * l + 1, 2 * l1 + 1, 2 * l2 + 1);
        let mut v = vec![0.0; n * n1 * n2];
        let (li, l1i, l2i) = (l as i64, l1 as i64, l2 as i64);
        for m in -li..=li {
            for m1 in -l1i..=l1i {
                for m2 in -l2i..=l2i {
                    v[(((m + li) as usize) * n1 + (m1 + l1i) as usize) * n2 + (m2 + l2i) as usize] =
                        sign * base.get(m, m2, m1);
                }
            }
        }
        v
    };
    Ok(GGBlock { ell: l, ell1: l1, ell2: l2, values })
}

/// Single coefficient `g^{m[m₁,m₂]}_{ℓ[ℓ₁,ℓ₂]}`; zero outside the triangle rule.
pub fn godunov_gordienko(l: usize, m: i64, l1: usize, m1: i64, l2: usize, m2: i64) -> f64 {
    if !triangle(l1, l2, l) {
        return 0.0;
    }
    gg_block(l, l1, l2).expect("coupling block").get(m, m1, m2)
}

/// `∫ Y^{m₁}_{ℓ₁} Y^{m₂}_{ℓ₂} Y^{m₃}_{ℓ₃} dS` through
/// `√((2ℓ₁+1)(2ℓ₂+1)/(4π(2ℓ₃+1))) g^{m₃[m₁,m₂]}_{ℓ₃[ℓ₁,ℓ₂]} g^{0[0,0]}_{ℓ₃[ℓ₁,ℓ₂]}`.
pub fn gaunt_real(l1: usize, m1: i64, l2: usize, m2: i64, l3: usize, m3: i64) -> f64 {
    if !triangle(l1, l2, l3) || (l1 + l2 + l3) % 2 == 1 {
        return 0.0;
    }
    let b = gg_block(l3, l1, l2).expect("coupling block");
    gaunt_from_block(&b, m1, m2, m3)
}

fn gaunt_from_block(b: &GGBlock, m1: i64, m2: i64, m3: i64) -> f64 {
    let pre = (((2 * b.ell1 + 1) * (2 * b.ell2 + 1)) as f64 / (4.0 * PI * (2 * b.ell + 1) as f64)).sqrt();
    pre * b.get(m3, m1, m2) * b.get(0, 0, 0)
}

/// Immutable cache of coefficient blocks keyed by `(ℓ, ℓ₁, ℓ₂)`.
#[derive(Debug, Clone, Default)]
pub struct GGTable {
    pub ell_max: usize,
    blocks: HashMap<(usize, usize, usize), GGBlock>,
}

impl GGTable {
    /// All triples with every degree `≤ ell_max` that satisfy the triangle rule.
    pub fn new(ell_max: usize) -> Result<Self> {
        let mut triples = Vec::new();
        for l in 0..=ell_max {
            for l1 in 0..=ell_max {
                for l2 in 0..=ell_max {
                    if triangle(l1, l2, l) {
                        triples.push((l, l1, l2));
                    }
                }
            }
        }
        Self::with_triples(ell_max, triples)
    }

    /// Only the listed triples (those violating the triangle rule are skipped).
    pub fn with_triples(ell_max: usize, triples: impl IntoIterator<Item = (usize, usize, usize)>) -> Result<Self> {
        let mut blocks = HashMap::new();
        for (l, l1, l2) in triples {
            if !triangle(l1, l2, l) || blocks.contains_key(&(l, l1, l2)) {
                continue;
            }
            blocks.insert((l, l1, l2), gg_block(l, l1, l2)?);
        }
        Ok(GGTable { ell_max, blocks })
    }

    pub fn block(&self, l: usize, l1: usize, l2: usize) -> Option<&GGBlock> {
        self.blocks.get(&(l, l1, l2))
    }

    /// Tabulated coefficient; zero for triangle-violating or absent triples.
    pub fn get(&self, l: usize, m: i64, l1: usize, m1: i64, l2: usize, m2: i64) -> f64 {
        self.block(l, l1, l2).map_or(0.0, |b| b.get(m, m1, m2))
    }

    /// Real Gaunt integral from tabulated blocks.
    pub fn gaunt(&self, l1: usize, m1: i64, l2: usize, m2: i64, l3: usize, m3: i64) -> f64 {
        if (l1 + l2 + l3) % 2 == 1 {
            return 0.0;
        }
        self.block(l3, l1, l2).map_or(0.0, |b| gaunt_from_block(b, m1, m2, m3))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Triples present, sorted.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.blocks.keys().copied().collect();
        t.sort_unstable();
        t
    }

    /// Writes a little-endian binary cache tagged with a format version and `ell_max`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(CACHE_MAGIC)?;
        f.write_all(&CACHE_VERSION.to_le_bytes())?;
        f.write_all(&(self.ell_max as u64).to_le_bytes())?;
        f.write_all(&(self.blocks.len() as u64).to_le_bytes())?;
        for (l, l1, l2) in self.triples() {
            let b = &self.blocks[&(l, l1, l2)];
            for x in [l, l1, l2] {
                f.write_all(&(x as u64).to_le_bytes())?;
            }
            for v in &b.values {
                f.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a cache written by [`GGTable::save`]; rejects other versions or bounds.
    pub fn load(path: &Path, ell_max: usize) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        let mut pos = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            if pos + n > buf.len() {
                return Err(Error::invalid("truncated coupling cache"));
            }
            let s = &buf[pos..pos + n];
            pos += n;
            Ok(s)
        };
        if take(8)? != CACHE_MAGIC {
            return Err(Error::invalid("not a coupling cache file"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(Error::invalid(format!("coupling cache version {version} unsupported")));
        }
        let stored = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        if stored != ell_max {
            return Err(Error::invalid(format!("coupling cache built for ell_max {stored}, wanted {ell_max}")));
        }
        let count = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        let mut blocks = HashMap::with_capacity(count);
        for _ in 0..count {
            let mut key = [0usize; 3];
            for k in key.iter_mut() {
                *k = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
            }
            let [l, l1, l2] = key;
            let n = (2 * l + 1) * (2 * l1 + 1) * (2 * l2 + 1);
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                values.push(f64::from_le_bytes(take(8)?.try_into().unwrap()));
            }
            blocks.insert((l, l1, l2), GGBlock { ell: l, ell1: l1, ell2: l2, values });
        }
        Ok(GGTable { ell_max, blocks })
    }
}
