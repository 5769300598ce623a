//! Classical Clebsch–Gordan coefficients from the exact-rational Racah formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn triangle(l1: i64, l2: i64, l: i64) -> bool {
    l >= (l1 - l2).abs() && l <= l1 + l2
}

/// `⟨ℓ₁ m₁ ℓ₂ m₂ | ℓ m⟩` for integer angular momenta.
///
/// The squared coefficient is formed exactly as a big rational and rounded once;
/// the result is zero outside the triangle rule, for `m ≠ m₁ + m₂` or `|mᵢ| > ℓᵢ`.
pub fn clebsch_gordan(l1: usize, m1: i64, l2: usize, m2: i64, l: usize, m: i64) -> f64 {
    let (l1, l2, l) = (l1 as i64, l2 as i64, l as i64);
    if m != m1 + m2 || m1.abs() > l1 || m2.abs() > l2 || m.abs() > l || !triangle(l1, l2, l) {
        return 0.0;
    }
    let mut sum = BigRational::zero();
    let k_lo = 0.max(l2 - l - m1).max(l1 - l + m2);
    let k_hi = (l1 + l2 - l).min(l1 - m1).min(l2 + m2);
    for k in k_lo..=k_hi {
        let den = fact(k)
            * fact(l1 + l2 - l - k)
            * fact(l1 - m1 - k)
            * fact(l2 + m2 - k)
            * fact(l - l2 + m1 + k)
            * fact(l - l1 - m2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let pre_num = BigInt::from(2 * l + 1)
        * fact(l + l1 - l2)
        * fact(l - l1 + l2)
        * fact(l1 + l2 - l)
        * fact(l + m)
        * fact(l - m)
        * fact(l1 - m1)
        * fact(l1 + m1)
        * fact(l2 - m2)
        * fact(l2 + m2);
    let pre = BigRational::new(pre_num, fact(l1 + l2 + l + 1));
    let sq = pre * &sum * &sum;
    let mag = sq.to_f64().expect("finite rational").sqrt();
    if sum.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Cache of classical coefficients for all triples with degrees `≤ ell_max`, stored as
/// dense `(m, m₁, m₂)` blocks.
#[derive(Debug, Clone)]
pub struct CGTable {
    pub ell_max: usize,
    blocks: HashMap<(usize, usize, usize), Vec<f64>>,
}

impl CGTable {
    pub fn new(ell_max: usize) -> Self {
        let mut blocks = HashMap::new();
        for l in 0..=ell_max {
            for l1 in 0..=ell_max {
                for l2 in 0..=ell_max {
                    if !triangle(l1 as i64, l2 as i64, l as i64) {
                        continue;
                    }
                    let (n, n1, n2) = (2 * l + 1, 2 * l1 + 1, 2 * l2 + 1);
                    let mut v = vec![0.0; n * n1 * n2];
                    for a in 0..n1 {
                        for b in 0..n2 {
                            let m1 = a as i64 - l1 as i64;
                            let m2 = b as i64 - l2 as i64;
                            let m = m1 + m2;
                            if m.abs() <= l as i64 {
                                let c = (m + l as i64) as usize;
                                v[(c * n1 + a) * n2 + b] = clebsch_gordan(l1, m1, l2, m2, l, m);
                            }
                        }
                    }
                    blocks.insert((l, l1, l2), v);
                }
            }
        }
        CGTable { ell_max, blocks }
    }

    /// Tabulated `⟨ℓ₁ m₁ ℓ₂ m₂ | ℓ m⟩`; zero outside the table or the selection rules.
    pub fn get(&self, l1: usize, m1: i64, l2: usize, m2: i64, l: usize, m: i64) -> f64 {
        if m1.unsigned_abs() as usize > l1 || m2.unsigned_abs() as usize > l2 || m.unsigned_abs() as usize > l {
            return 0.0;
        }
        match self.blocks.get(&(l, l1, l2)) {
            None => 0.0,
            Some(v) => {
                let (n1, n2) = (2 * l1 + 1, 2 * l2 + 1);
                let c = (m + l as i64) as usize;
                let a = (m1 + l1 as i64) as usize;
                let b = (m2 + l2 as i64) as usize;
                v[(c * n1 + a) * n2 + b]
            }
        }
    }
}
