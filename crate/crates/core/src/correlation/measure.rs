//! Atomic spectral measures on `[0, ∞)` and pairs of them for vector fields.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on the zero-atom balance of a [`VectorSpectralPair`].
const ZERO_ATOM_TOL: f64 = 1e-12;

/// One point mass of a spectral measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub lambda: f64,
    pub mass: f64,
}

/// Finite atomic measure `Φ = Σ mass_k δ_{λ_k}` with strictly increasing wavenumbers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct SpectralMeasure {
    atoms: Vec<Atom>,
}

impl SpectralMeasure {
    /// Validates `λ ≥ 0`, `mass > 0`, finiteness and strict ordering of the wavenumbers.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (k, a) in atoms.iter().enumerate() {
            if !(a.lambda.is_finite() && a.lambda >= 0.0) {
                return Err(Error::invalid(format!(
                    "atom {k}: lambda must be finite and non-negative, got {}",
                    a.lambda
                )));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::invalid(format!("atom {k}: mass must be finite and positive, got {}", a.mass)));
            }
            if k > 0 && a.lambda <= atoms[k - 1].lambda {
                return Err(Error::invalid(format!("atom {k}: lambdas must be strictly increasing")));
            }
        }
        Ok(SpectralMeasure { atoms })
    }

    /// Builds a measure from `(λ, mass)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(lambda, mass)| Atom { lambda, mass }).collect())
    }

    pub fn single(lambda: f64, mass: f64) -> Result<Self> {
        Self::from_pairs(&[(lambda, mass)])
    }

    pub fn empty() -> Self {
        SpectralMeasure { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mass of the atom at `λ = 0`, if any.
    pub fn zero_atom_mass(&self) -> f64 {
        self.atoms.first().filter(|a| a.lambda == 0.0).map_or(0.0, |a| a.mass)
    }

    pub fn has_zero_atom(&self) -> bool {
        self.zero_atom_mass() > 0.0
    }

    pub fn max_lambda(&self) -> f64 {
        self.atoms.last().map_or(0.0, |a| a.lambda)
    }

    /// `Σ mass_k · f(λ_k)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.mass * f(a.lambda)).sum()
    }

    /// The measure with every mass multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.atoms.iter().map(|a| Atom { lambda: a.lambda, mass: a.mass * c }).collect())
    }
}

impl TryFrom<Vec<Atom>> for SpectralMeasure {
    type Error = Error;
    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        Self::new(atoms)
    }
}

impl From<SpectralMeasure> for Vec<Atom> {
    fn from(m: SpectralMeasure) -> Self {
        m.atoms
    }
}

/// How the two measures of a vector pair enter the correlation tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Longitudinal/transverse spectral form; requires `Φ₁({0}) = Φ₂({0})`.
    Yaglom,
    /// Barycentric (harmonic) form built from `j₀`, `j₂`; requires `Φ₁({0}) = 2Φ₂({0})`.
    Barycentric,
}

/// Pair `(Φ₁, Φ₂)` parameterising an isotropic vector field on ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairSpec", into = "PairSpec")]
pub struct VectorSpectralPair {
    pub phi1: SpectralMeasure,
    pub phi2: SpectralMeasure,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub phi1: SpectralMeasure,
    pub phi2: SpectralMeasure,
    pub normalization: Normalization,
}

impl TryFrom<PairSpec> for VectorSpectralPair {
    type Error = Error;
    fn try_from(s: PairSpec) -> Result<Self> {
        VectorSpectralPair::new(s.phi1, s.phi2, s.normalization)
    }
}

impl From<VectorSpectralPair> for PairSpec {
    fn from(p: VectorSpectralPair) -> Self {
        PairSpec { phi1: p.phi1, phi2: p.phi2, normalization: p.normalization }
    }
}

impl VectorSpectralPair {
    /// Rejects pairs violating the zero-atom condition of their normalization.
    pub fn new(phi1: SpectralMeasure, phi2: SpectralMeasure, normalization: Normalization) -> Result<Self> {
        let (z1, z2) = (phi1.zero_atom_mass(), phi2.zero_atom_mass());
        let (lhs, rhs) = match normalization {
            Normalization::Yaglom => (z1, z2),
            Normalization::Barycentric => (z1, 2.0 * z2),
        };
        if (lhs - rhs).abs() > ZERO_ATOM_TOL * (1.0 + lhs.abs().max(rhs.abs())) {
            return Err(Error::invalid(format!(
                "zero-atom condition violated for {normalization:?} pair: {z1} vs {z2}"
            )));
        }
        Ok(VectorSpectralPair { phi1, phi2, normalization })
    }

    /// Equivalent pair in the barycentric normalization.
    ///
    /// Both forms describe the same tensor when `Φ₁ᵇ = 2Φ₂ʸ` and `Φ₂ᵇ = Φ₁ʸ`.
    pub fn to_barycentric(&self) -> Result<Self> {
        match self.normalization {
            Normalization::Barycentric => Ok(self.clone()),
            Normalization::Yaglom => Self::new(self.phi2.scaled(2.0)?, self.phi1.clone(), Normalization::Barycentric),
        }
    }

    /// Equivalent pair in the Yaglom normalization.
    pub fn to_yaglom(&self) -> Result<Self> {
        match self.normalization {
            Normalization::Yaglom => Ok(self.clone()),
            Normalization::Barycentric => Self::new(self.phi2.clone(), self.phi1.scaled(0.5)?, Normalization::Yaglom),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.phi1.total_mass() + self.phi2.total_mass()
    }
}
