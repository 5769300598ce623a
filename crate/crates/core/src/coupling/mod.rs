//! Coupling coefficients: classical Clebsch–Gordan values, their real-basis
//! (Godunov–Gordienko) counterparts, and real Gaunt integrals.

pub mod cg;
pub mod check;
pub mod gg;

pub use cg::{clebsch_gordan, CGTable};
pub use check::{gaunt_check, GauntReport};
pub use gg::{gaunt_real, gg_block, godunov_gordienko, GGBlock, GGTable};
