//! Angular power spectra of the spin-0 components `(Θ, E, B, V)`.

use crate::error::{Error, Result};
use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Spin-0 components of the polarized sky, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Theta,
    E,
    B,
    V,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Theta, Component::E, Component::B, Component::V];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Theta => "Theta",
            Component::E => "E",
            Component::B => "B",
            Component::V => "V",
        }
    }

    /// `true` for B, the only component of odd (magnetic) parity.
    pub fn is_magnetic(self) -> bool {
        self == Component::B
    }
}

/// A 4×4 matrix over `(Θ, E, B, V)`.
pub type Cell = [[f64; 4]; 4];

/// Relative tolerance for symmetry of a cell.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative tolerance for the smallest eigenvalue of a cell.
pub const PSD_REL_TOL: f64 = 1e-10;

/// Lowest multipole of each component, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllMin {
    #[serde(default = "two")]
    pub theta: usize,
    #[serde(default = "two")]
    pub e: usize,
    #[serde(default = "two")]
    pub b: usize,
    #[serde(default)]
    pub v: usize,
}

fn two() -> usize {
    2
}

impl Default for EllMin {
    /// 2 for Θ, E, B and 0 for V.
    fn default() -> Self {
        EllMin { theta: 2, e: 2, b: 2, v: 0 }
    }
}

impl EllMin {
    pub fn as_array(&self) -> [usize; 4] {
        [self.theta, self.e, self.b, self.v]
    }
}

/// Per-multipole cross-covariances `C^{XY}_ℓ = E[a^{X*}_{ℓm} a^Y_{ℓm}]`.
///
/// Rows and columns of components below their `ell_min` are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumSpec", into = "SpectrumSpec")]
pub struct AngularPowerSpectrum {
    ell_max: usize,
    ell_min: EllMin,
    enforce_parity: bool,
    cells: Vec<Cell>,
}

fn mask(cell: &mut Cell, ell: usize, ell_min: &EllMin) {
    for (c, &lo) in ell_min.as_array().iter().enumerate() {
        if ell < lo {
            for k in 0..4 {
                cell[c][k] = 0.0;
                cell[k][c] = 0.0;
            }
        }
    }
}

/// Smallest eigenvalue of a symmetric cell.
pub fn cell_min_eigenvalue(cell: &Cell) -> f64 {
    SymmetricEigen::new(Matrix4::from_fn(|i, j| cell[i][j])).eigenvalues.min()
}

impl AngularPowerSpectrum {
    /// Builds a spectrum from cells indexed by `ℓ = 0..=ell_max`, zeroing entries below
    /// each component's `ell_min`.
    pub fn new(ell_min: EllMin, cells: Vec<Cell>, enforce_parity: bool) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::invalid("spectrum needs at least one multipole"));
        }
        if ell_min.e < 2 || ell_min.b < 2 {
            return Err(Error::invalid("ell_min for E and B must be at least 2"));
        }
        let ell_max = cells.len() - 1;
        let mut out = Vec::with_capacity(cells.len());
        for (ell, mut cell) in cells.into_iter().enumerate() {
            if cell.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("C_{ell} has non-finite entries")));
            }
            let scale = cell.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            for i in 0..4 {
                for j in 0..i {
                    if (cell[i][j] - cell[j][i]).abs() > SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE) {
                        return Err(Error::invalid(format!("C_{ell} is not symmetric at ({i}, {j})")));
                    }
                }
            }
            mask(&mut cell, ell, &ell_min);
            if enforce_parity {
                for (a, b) in [(0, 2), (1, 2), (2, 3)] {
                    if cell[a][b] != 0.0 {
                        return Err(Error::invalid(format!(
                            "C_{ell} violates the parity constraint: {}{} = {}",
                            Component::ALL[a].name(),
                            Component::ALL[b].name(),
                            cell[a][b]
                        )));
                    }
                }
            }
            let min = cell_min_eigenvalue(&cell);
            if min < -PSD_REL_TOL * scale {
                return Err(Error::numerical(format!("C_{ell} is not positive semidefinite (eigenvalue {min:e})")));
            }
            out.push(cell);
        }
        Ok(AngularPowerSpectrum { ell_max, ell_min, enforce_parity, cells: out })
    }

    /// `C_ℓ = A · max(ℓ, 1)^{−α}` for `ℓ ≤ ell_max`.
    pub fn power_law(
        amplitude: Cell,
        alpha: f64,
        ell_max: usize,
        ell_min: EllMin,
        enforce_parity: bool,
    ) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid("power-law exponent must be finite"));
        }
        let cells = (0..=ell_max)
            .map(|ell| {
                let f = (ell.max(1) as f64).powf(-alpha);
                amplitude.map(|row| row.map(|v| v * f))
            })
            .collect();
        Self::new(ell_min, cells, enforce_parity)
    }

    /// Diagonal spectrum with `C^{XX}_ℓ = diag[X]` for every `ℓ`.
    pub fn diagonal(diag: [f64; 4], ell_max: usize, ell_min: EllMin) -> Result<Self> {
        let mut cell = [[0.0; 4]; 4];
        for k in 0..4 {
            cell[k][k] = diag[k];
        }
        Self::new(ell_min, vec![cell; ell_max + 1], true)
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn ell_min(&self) -> EllMin {
        self.ell_min
    }

    pub fn enforce_parity(&self) -> bool {
        self.enforce_parity
    }

    /// `C_ℓ`, zero beyond `ell_max`.
    pub fn cell(&self, ell: usize) -> Cell {
        self.cells.get(ell).copied().unwrap_or([[0.0; 4]; 4])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// The same spectrum on `0..=ell_max`, truncated or padded with zero multipoles.
    pub fn with_ell_max(&self, ell_max: usize) -> Result<Self> {
        Self::new(self.ell_min, (0..=ell_max).map(|ell| self.cell(ell)).collect(), self.enforce_parity)
    }

    /// `c · C_ℓ` for every `ℓ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::invalid("scale factor must be finite and non-negative"));
        }
        let cells = self.cells.iter().map(|cell| cell.map(|row| row.map(|v| v * c))).collect();
        Self::new(self.ell_min, cells, self.enforce_parity)
    }
}

/// One tabulated multipole.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub ell: usize,
    pub matrix: Cell,
}

/// Closed forms and tables accepted in spectrum files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(remote = "Self", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumModel {
    /// Listed multipoles; missing ones are zero.
    Tabulated { cells: Vec<CellEntry> },
    /// `C_ℓ = A · max(ℓ, 1)^{−α}`.
    PowerLaw { amplitude: Cell, alpha: f64 },
}
crate::tagged::kind_tagged!(SpectrumModel);

/// File representation of an [`AngularPowerSpectrum`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub ell_max: usize,
    #[serde(default)]
    pub ell_min: EllMin,
    #[serde(default)]
    pub enforce_parity: bool,
    pub model: SpectrumModel,
}

impl TryFrom<SpectrumSpec> for AngularPowerSpectrum {
    type Error = Error;
    fn try_from(s: SpectrumSpec) -> Result<Self> {
        match s.model {
            SpectrumModel::PowerLaw { amplitude, alpha } => {
                Self::power_law(amplitude, alpha, s.ell_max, s.ell_min, s.enforce_parity)
            }
            SpectrumModel::Tabulated { cells } => {
                let mut table = vec![[[0.0; 4]; 4]; s.ell_max + 1];
                for entry in cells {
                    let slot = table.get_mut(entry.ell).ok_or_else(|| {
                        Error::invalid(format!("cell ell = {} exceeds ell_max = {}", entry.ell, s.ell_max))
                    })?;
                    *slot = entry.matrix;
                }
                Self::new(s.ell_min, table, s.enforce_parity)
            }
        }
    }
}

impl From<AngularPowerSpectrum> for SpectrumSpec {
    fn from(p: AngularPowerSpectrum) -> Self {
        SpectrumSpec {
            ell_max: p.ell_max,
            ell_min: p.ell_min,
            enforce_parity: p.enforce_parity,
            model: SpectrumModel::Tabulated {
                cells: p.cells.into_iter().enumerate().map(|(ell, matrix)| CellEntry { ell, matrix }).collect(),
            },
        }
    }
}
