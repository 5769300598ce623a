//! Ogden isotropic tensors of even rank `2ν + 2`:
//! `I_ij = δ_ij`, `I_ijkl = ½(δ_ik δ_jl + δ_il δ_jk)`, and for `ν ≥ 2`
//! `I_{i₁…i_{2ν+2}} = ν⁻¹ Σ_{q=1}^{ν} I_{i₁ p i_{2q+1} i_{2q+2}} I_{p i₂ ⋯}` where the second
//! factor carries the remaining indices in order.

use crate::error::{Error, Result};

/// Dense tensor over `{0,1,2}^rank`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OgdenTensor {
    pub rank: usize,
    data: Vec<f64>,
}

impl OgdenTensor {
    /// Supported ranks are 2, 4 and 6.
    pub fn new(rank: usize) -> Result<Self> {
        match rank {
            2 | 4 | 6 => Ok(build(rank)),
            _ => Err(Error::invalid(format!("Ogden tensors are provided for ranks 2, 4, 6; got {rank}"))),
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.rank, "index length must equal the rank");
        self.data[flat(idx)]
    }
}

fn flat(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * 3 + i)
}

fn unflat(mut n: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for k in (0..rank).rev() {
        idx[k] = n % 3;
        n /= 3;
    }
    idx
}

fn build(rank: usize) -> OgdenTensor {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let size = 3usize.pow(rank as u32);
    let data = match rank {
        2 => (0..size)
            .map(|n| {
                let i = unflat(n, 2);
                d(i[0], i[1])
            })
            .collect(),
        4 => (0..size)
            .map(|n| {
                let i = unflat(n, 4);
                0.5 * (d(i[0], i[2]) * d(i[1], i[3]) + d(i[0], i[3]) * d(i[1], i[2]))
            })
            .collect(),
        _ => {
            let lower = build(rank - 2);
            let four = build(4);
            let nu = (rank - 2) / 2;
            (0..size)
                .map(|n| {
                    let i = unflat(n, rank);
                    let mut s = 0.0;
                    for q in 1..=nu {
                        let (a, b) = (2 * q, 2 * q + 1);
                        for p in 0..3 {
                            let mut rest = vec![p, i[1]];
                            rest.extend((2..rank).filter(|&k| k != a && k != b).map(|k| i[k]));
                            s += four.get(&[i[0], p, i[a], i[b]]) * lower.get(&rest);
                        }
                    }
                    s / nu as f64
                })
                .collect()
        }
    };
    OgdenTensor { rank, data }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_rank() {
        assert!(OgdenTensor::new(8).is_err());
        assert!(OgdenTensor::new(3).is_err());
    }
}
