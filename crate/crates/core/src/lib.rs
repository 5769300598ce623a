//! Isotropic random fields: tensor-valued fields on R^3 of ranks 0, 1 and 2, and
//! spin-weighted fields on the sphere (CMB Stokes parameters).
//!
//! The crate is organised bottom-up:
//!
//! * [`special_fn`] spherical Bessel functions, scalar and spin-weighted harmonics,
//!   Wigner entries, the eth operators on the harmonic basis, and spherical quadrature.
//! * [`coupling`] Clebsch–Gordan, Godunov–Gordienko (real-basis) coupling
//!   coefficients and real Gaunt integrals.
//! * [`correlation`] closed-form correlation tensors, restriction relations and basis algebra.
//! * [`simulate`] truncated Karhunen synthesis on R^3 and empirical estimators.
//! * [`sphere`] CMB map synthesis, analysis, E/B decomposition and spectrum estimation.
//! * [`cli`] configuration, CSV/JSON I/O and the verification harness used by the binary.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod correlation;
pub mod coupling;
pub mod error;
pub mod simulate;
pub mod special_fn;
pub mod sphere;
mod tagged;

pub use error::{Error, Result};
