//! Simulation plans and realization containers.

use crate::correlation::{SpectralMeasure, VectorSpectralPair};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Default truncation degree.
pub const DEFAULT_ELL_MAX: usize = 16;

fn default_ell_max() -> usize {
    DEFAULT_ELL_MAX
}

/// Field model and its spectral data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(remote = "Self", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldModel {
    Scalar {
        spectrum: SpectralMeasure,
    },
    Vector {
        pair: VectorSpectralPair,
    },
    /// `C_ij = μ δ_ij + s a_i b_j` on the first two components of independent vector fields.
    Dyadic {
        mu: f64,
        s: f64,
        a: VectorSpectralPair,
        b: VectorSpectralPair,
    },
}
crate::tagged::kind_tagged!(FieldModel);

impl FieldModel {
    pub fn kind(&self) -> &'static str {
        match self {
            FieldModel::Scalar { .. } => "scalar",
            FieldModel::Vector { .. } => "vector",
            FieldModel::Dyadic { .. } => "dyadic",
        }
    }

    /// Number of values per point.
    pub fn components(&self) -> usize {
        match self {
            FieldModel::Scalar { .. } => 1,
            FieldModel::Vector { .. } => 3,
            FieldModel::Dyadic { .. } => 4,
        }
    }

    /// Names of the value components.
    pub fn component_names(&self) -> Vec<&'static str> {
        match self {
            FieldModel::Scalar { .. } => vec!["value"],
            FieldModel::Vector { .. } => vec!["x", "y", "z"],
            FieldModel::Dyadic { .. } => vec!["c11", "c12", "c21", "c22"],
        }
    }
}

/// Everything that determines a set of realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationPlan {
    pub model: FieldModel,
    #[serde(default = "default_ell_max")]
    pub ell_max: usize,
    pub points: Vec<[f64; 3]>,
    pub realizations: usize,
    #[serde(default)]
    pub master_seed: u64,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::invalid("realizations must be at least 1"));
        }
        if self.points.is_empty() {
            return Err(Error::invalid("points must be non-empty"));
        }
        if self.points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::invalid("points must be finite"));
        }
        if let FieldModel::Dyadic { mu, s, .. } = &self.model {
            if !(mu.is_finite() && s.is_finite()) {
                return Err(Error::invalid("dyadic mu and s must be finite"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization, as lowercase hex.
    pub fn config_hash(&self) -> String {
        let text = serde_json::to_string(self).expect("plans serialize");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Accuracy heuristic `ell_max ≥ λ_max r_max + 10`.
    pub fn recommended_ell_max(&self) -> usize {
        let lambda = match &self.model {
            FieldModel::Scalar { spectrum } => spectrum.max_lambda(),
            FieldModel::Vector { pair } => pair.phi1.max_lambda().max(pair.phi2.max_lambda()),
            FieldModel::Dyadic { a, b, .. } => {
                a.phi1.max_lambda().max(a.phi2.max_lambda()).max(b.phi1.max_lambda()).max(b.phi2.max_lambda())
            }
        };
        let r = self.points.iter().map(|p| crate::correlation::cartesian::norm3(*p)).fold(0.0, f64::max);
        (lambda * r).ceil() as usize + 10
    }
}

/// Provenance carried with every realization set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationMetadata {
    pub kind: String,
    pub master_seed: u64,
    pub ell_max: usize,
    pub realizations: usize,
    pub config_hash: String,
    /// The driving noise is Gaussian.
    pub gaussian: bool,
}

/// Values indexed by `(realization, point, component)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub points: Vec<[f64; 3]>,
    pub components: usize,
    pub component_names: Vec<String>,
    pub values: Vec<f64>,
    pub metadata: RealizationMetadata,
}

impl FieldRealization {
    pub fn realizations(&self) -> usize {
        self.values.len() / (self.points.len() * self.components).max(1)
    }

    #[inline]
    pub fn get(&self, realization: usize, point: usize, component: usize) -> f64 {
        self.values[(realization * self.points.len() + point) * self.components + component]
    }

    /// Assembles a realization set from per-realization blocks of `points × components`.
    pub(crate) fn from_blocks(plan: &SimulationPlan, blocks: Vec<Vec<f64>>) -> Result<Self> {
        let values: Vec<f64> = blocks.into_iter().flatten().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("simulation produced non-finite values"));
        }
        Ok(FieldRealization {
            points: plan.points.clone(),
            components: plan.model.components(),
            component_names: plan.model.component_names().into_iter().map(String::from).collect(),
            values,
            metadata: RealizationMetadata {
                kind: plan.model.kind().to_string(),
                master_seed: plan.master_seed,
                ell_max: plan.ell_max,
                realizations: plan.realizations,
                config_hash: plan.config_hash(),
                gaussian: true,
            },
        })
    }
}
