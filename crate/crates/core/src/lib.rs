//! Regularized least-squares approximation on the unit sphere.
//!
//! * [`harmonics`]: real orthonormal spherical harmonics and Legendre polynomials
//! * [`cubature`]: Gauss-Legendre product rules and probe grids
//! * [`approx`]: Tikhonov-regularized fits, filtered approximation, operator norms
//! * [`params`]: penalization weights, balancing principle, kernel search
//! * [`experiments`]: synthetic studies with persisted reports
//! * [`cli`]: the `spherefit` command line

pub mod approx;
pub mod cli;
pub mod cubature;
pub mod defaults;
pub mod error;
pub mod experiments;
pub mod harmonics;
pub mod io;
pub mod params;

pub use error::{Error, Result};
