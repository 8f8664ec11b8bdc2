//! Spectral analysis of the horizontal tangential operator `L_HS` on the unit
//! isoperimetric profile of the Heisenberg group `ℍⁿ`.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma family and the Gauss hypergeometric function on `[0, 1)`.
//! - [`numerics`]: Gauss–Jacobi quadrature, tridiagonal and dense eigensolvers, bisection.
//! - [`geometry`]: closed-form profile geometry and a CC-geodesic integrator.
//! - [`operators`]: pointwise `L_HS` in radial, full and polar form, plus identity suites.
//! - [`spectrum`]: closed-form eigenpairs, discretised spectra, Rayleigh and Green checks.
//! - [`report`]: CSV/JSON/gnuplot serialisation of spectrum tables.
//! - [`cli`]: the `hprofile` command-line surface.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod operators;
pub mod report;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use geometry::{Hemisphere, ProfileParams};
