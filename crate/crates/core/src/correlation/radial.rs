//! Scalar radial functions `r ↦ value` used as coefficients of correlation tensors.

use crate::error::{Error, Result};
use crate::special_fn::{gauss_legendre, spherical_bessel};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Relative step of the central-difference derivative.
pub const DERIVATIVE_STEP: f64 = 1e-5;

/// Radial function given in closed form, by a table, or derived from another one through
/// a restriction relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(remote = "Self", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialFn {
    Constant {
        value: f64,
    },
    /// `scale · exp(−(r/length)²)`.
    Gaussian {
        scale: f64,
        length: f64,
    },
    /// `scale · exp(−r/length)`.
    Exponential {
        scale: f64,
        length: f64,
    },
    /// `mass · j₀(λ r)`.
    BesselAtom {
        lambda: f64,
        mass: f64,
    },
    Table(CubicTable),
    /// `g = f + r f′/(n−1)` for a solenoidal field in ℝⁿ.
    SolenoidalG {
        f: Box<RadialFn>,
        n: usize,
    },
    /// `f = g + r g′` for an irrotational field.
    IrrotationalF {
        g: Box<RadialFn>,
    },
    /// Inverse of `SolenoidalG`: `f(r) = (n−1) r^{1−n} ∫₀^r s^{n−2} g(s) ds`.
    SolenoidalF {
        g: Box<RadialFn>,
        n: usize,
    },
    /// Inverse of `IrrotationalF`: `g(r) = r^{−1} ∫₀^r f(s) ds`.
    IrrotationalG {
        f: Box<RadialFn>,
    },
}
crate::tagged::kind_tagged!(RadialFn);

impl RadialFn {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialFn::Constant { value } => *value,
            RadialFn::Gaussian { scale, length } => scale * (-(r / length).powi(2)).exp(),
            RadialFn::Exponential { scale, length } => scale * (-r / length).exp(),
            RadialFn::BesselAtom { lambda, mass } => mass * spherical_bessel(0, lambda * r),
            RadialFn::Table(t) => t.eval(r),
            RadialFn::SolenoidalG { f, n } => f.eval(r) + r * f.derivative(r) / (*n as f64 - 1.0),
            RadialFn::IrrotationalF { g } => g.eval(r) + r * g.derivative(r),
            RadialFn::SolenoidalF { g, n } => {
                if r == 0.0 {
                    return g.eval(0.0);
                }
                let k = *n as i32 - 2;
                let nm1 = *n as f64 - 1.0;
                nm1 * integrate_0_r(|s| s.powi(k) * g.eval(s), r) / r.powi(k + 1)
            }
            RadialFn::IrrotationalG { f } => {
                if r == 0.0 {
                    return f.eval(0.0);
                }
                integrate_0_r(|s| f.eval(s), r) / r
            }
        }
    }

    /// Central difference with step `h = 1e-5·max(r, 1)`; arguments below zero are
    /// reflected, treating the function as even in `r`.
    pub fn derivative(&self, r: f64) -> f64 {
        let h = DERIVATIVE_STEP * r.abs().max(1.0);
        (self.eval((r + h).abs()) - self.eval((r - h).abs())) / (2.0 * h)
    }

    /// Checks the parameters (positive lengths, dimension `n ≥ 2`) recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            RadialFn::Gaussian { length, .. } | RadialFn::Exponential { length, .. }
                if length.is_nan() || *length <= 0.0 =>
            {
                Err(Error::invalid("radial function length must be positive"))
            }
            RadialFn::SolenoidalG { f, n } => check_dim(*n).and_then(|_| f.validate()),
            RadialFn::SolenoidalF { g, n } => check_dim(*n).and_then(|_| g.validate()),
            RadialFn::IrrotationalF { g } => g.validate(),
            RadialFn::IrrotationalG { f } => f.validate(),
            _ => Ok(()),
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::invalid("dimension must be at least 2"))
    } else {
        Ok(())
    }
}

/// `g` from `f` for a solenoidal field in ℝⁿ.
pub fn solenoidal_g_from_f(f: RadialFn, n: usize) -> RadialFn {
    RadialFn::SolenoidalG { f: Box::new(f), n }
}

/// `f` from `g` for an irrotational field.
pub fn irrotational_f_from_g(g: RadialFn) -> RadialFn {
    RadialFn::IrrotationalF { g: Box::new(g) }
}

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(32))
}

/// Composite Gauss–Legendre rule on `[0, r]` with panels of length at most 1/2.
fn integrate_0_r(f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let (x, w) = gl_nodes();
    let panels = (2.0 * r).ceil().max(1.0) as usize;
    let len = r / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * len;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + 0.5 * len * xi);
        }
    }
    0.5 * len * s
}

/// Natural cubic spline through `(r_k, value_k)` on a strictly increasing grid; constant
/// beyond the end points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct CubicTable {
    r: Vec<f64>,
    value: Vec<f64>,
    second: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableData {
    pub r: Vec<f64>,
    pub value: Vec<f64>,
}

impl TryFrom<TableData> for CubicTable {
    type Error = Error;
    fn try_from(t: TableData) -> Result<Self> {
        CubicTable::new(t.r, t.value)
    }
}

impl From<CubicTable> for TableData {
    fn from(t: CubicTable) -> Self {
        TableData { r: t.r, value: t.value }
    }
}

impl CubicTable {
    pub fn new(r: Vec<f64>, value: Vec<f64>) -> Result<Self> {
        let n = r.len();
        if n < 2 || value.len() != n {
            return Err(Error::invalid("table needs at least two points and equal-length columns"));
        }
        if r.iter().chain(&value).any(|v| !v.is_finite()) {
            return Err(Error::invalid("table entries must be finite"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("table grid must be strictly increasing"));
        }
        // Tridiagonal solve for the second derivatives, natural end conditions.
        let mut second = vec![0.0; n];
        let mut u = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (r[i] - r[i - 1]) / (r[i + 1] - r[i - 1]);
            let p = sig * second[i - 1] + 2.0;
            second[i] = (sig - 1.0) / p;
            let d = (value[i + 1] - value[i]) / (r[i + 1] - r[i]) - (value[i] - value[i - 1]) / (r[i] - r[i - 1]);
            u[i] = (6.0 * d / (r[i + 1] - r[i - 1]) - sig * u[i - 1]) / p;
        }
        second[n - 1] = 0.0;
        for k in (0..n - 1).rev() {
            second[k] = second[k] * second[k + 1] + u[k];
        }
        Ok(CubicTable { r, value, second })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x <= self.r[0] {
            return self.value[0];
        }
        if x >= self.r[n - 1] {
            return self.value[n - 1];
        }
        let hi = self.r.partition_point(|&v| v <= x).min(n - 1);
        let lo = hi - 1;
        let h = self.r[hi] - self.r[lo];
        let a = (self.r[hi] - x) / h;
        let b = (x - self.r[lo]) / h;
        a * self.value[lo]
            + b * self.value[hi]
            + ((a * a * a - a) * self.second[lo] + (b * b * b - b) * self.second[hi]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_nodes_and_lines() {
        let t = CubicTable::new(vec![0.0, 1.0, 2.5, 4.0], vec![1.0, 3.0, 6.0, 9.0]).unwrap();
        assert!((t.eval(2.5) - 6.0).abs() < 1e-15);
        let line = CubicTable::new(vec![0.0, 0.5, 1.0, 3.0], vec![0.0, 1.0, 2.0, 6.0]).unwrap();
        assert!((line.eval(1.7) - 3.4).abs() < 1e-14);
        assert!(CubicTable::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn inverse_integrals_at_origin() {
        let f = RadialFn::Gaussian { scale: 2.0, length: 1.0 };
        let g = RadialFn::IrrotationalG { f: Box::new(f.clone()) };
        assert_eq!(g.eval(0.0), 2.0);
        let s = RadialFn::SolenoidalF { g: Box::new(f), n: 3 };
        assert_eq!(s.eval(0.0), 2.0);
    }

    #[test]
    fn serde_shapes() {
        let f: RadialFn = serde_json::from_str(r#"{"kind":"gaussian","scale":1.0,"length":2.0}"#).unwrap();
        assert!((f.eval(2.0) - (-1.0f64).exp()).abs() < 1e-15);
        let t: RadialFn = serde_json::from_str(r#"{"kind":"table","r":[0,1],"value":[1,0]}"#).unwrap();
        assert!((t.eval(0.5) - 0.5).abs() < 1e-15);
        assert!(serde_json::from_str::<RadialFn>(r#"{"kind":"gaussian","scale":1.0}"#).is_err());
    }
}
