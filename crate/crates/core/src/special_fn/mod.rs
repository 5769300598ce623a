//! Special functions: spherical Bessel functions, harmonics, Wigner entries, eth
//! ladder coefficients, the plane-wave expansion and spherical quadrature.

pub mod bessel;
pub mod closed_form;
pub mod eth;
pub mod harmonics;
pub mod point;
pub mod quadrature;
pub mod rayleigh;
pub mod wigner;

pub use bessel::{bessel_j_int, schoenberg_kernel, spherical_bessel, spherical_bessel_array};
pub use eth::{eth_on_basis, eth_power, EthDirection, EthFactor};
pub use harmonics::{
    complex_harmonic, complex_harmonics_all, complex_to_real_matrix, legendre_table, lm_count, lm_index, real_harmonic,
    real_harmonics_all, real_rotation_m0, spin_harmonic, spin_harmonics_all, wigner_D_m0, HarmonicIndex,
};
pub use point::SphericalPoint;
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use rayleigh::rayleigh_partial_sum;
pub use wigner::{wigner_small_d, wigner_small_d_column};
