//! Isotropic random fields on the sphere: the temperature `Θ`, linear polarization `Q ± iU`
//! (spin ±2, decomposed into the spin-0 `E` and `B` fields) and circular polarization `V`.
//!
//! Coefficients are drawn independently per `(ℓ, m)` with `m`-independent covariance `C_ℓ`;
//! maps are synthesized at arbitrary points and analyzed exactly on Gauss–Legendre grids.

pub mod alm;
pub mod estimate;
pub mod real_basis;
pub mod spectrum;
pub mod transform;

pub use alm::{eb_via_eth, eb_weight, parity_transform, synthesize_alm, AlmSampler, AlmSet, Spin2Alm};
pub use estimate::{cell_of, estimate_cell, CellEstimate};
pub use real_basis::{
    complex_to_real_coeffs, real_basis_expansion, real_spin2_harmonics, real_to_complex_coeffs, RealAlmSet,
};
pub use spectrum::{AngularPowerSpectrum, Cell, Component, EllMin, SpectrumModel, SpectrumSpec};
pub use transform::{
    alm_to_stokes, gl_grid, grid_from_points, spin2_projections, stokes_to_alm, HarmonicTables, SphereAnalysis,
    StokesMap,
};
