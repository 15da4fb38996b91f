//! Corner rounding by kernel convolution and 2D Helmholtz scattering by Nyström discretization.
//!
//! Polygons are rounded with compactly supported polynomial kernels or a truncated Gaussian,
//! discretized into resolved Gauss-Legendre panels, and used as scatterers for sound-soft and
//! sound-hard problems. A dyadically graded mesh on the unrounded polygon provides reference
//! solutions for convergence studies.

pub mod diffeo;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod io;
pub mod layerpot;
pub mod panels;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
