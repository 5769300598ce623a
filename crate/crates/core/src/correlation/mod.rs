//! Closed-form correlation structures of isotropic fields of ranks 0–2, restriction
//! relations between their radial functions, and the supporting basis-tensor algebra.

pub mod cartesian;
pub mod fabric;
pub mod m_to_l;
pub mod measure;
pub mod ogden;
pub mod radial;
pub mod rank2;
pub mod restrictions;
pub mod scalar;
pub mod vector;

pub use cartesian::{Mat3, Tensor4};
pub use fabric::{fabric_tensors, FabricTensors};
pub use m_to_l::{rank1_identities, rank1_identity_gap, rank2_identities, rank2_identity_gap};
pub use measure::{Atom, Normalization, SpectralMeasure, VectorSpectralPair};
pub use ogden::OgdenTensor;
pub use radial::{irrotational_f_from_g, solenoidal_g_from_f, CubicTable, RadialFn};
pub use rank2::{decompose_l, l_tensors, rank1_corr, rank2_corr, KernelBasis, RadialKernelSet};
pub use restrictions::{
    damage_a_from_m, damage_m_from_a, damage_m_from_s, inplane_h_from_t, inplane_tensor, reynolds_energy_corr,
    DamageCoefficients,
};
pub use scalar::scalar_corr;
pub use vector::{longitudinal_lateral, vector_corr, vector_corr_yaglom, yaglom_longitudinal_transverse};
