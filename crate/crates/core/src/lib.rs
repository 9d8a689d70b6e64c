//! Exact verification of a sigma-invariant quintic surface in `P^3` and of
//! the divisor-class arithmetic behind its double-plane model.
//!
//! The polynomial and germ code is generic over [`Scalar`]; the aliases
//! below fix the coefficient field used throughout the checks.

pub mod cli;
pub mod divcalc;
pub mod exactnum;
pub mod germlab;
pub mod linalg;
pub mod mpoly;
pub mod quintic;
pub mod scalar;
pub mod scenarios;
pub mod text;

pub use exactnum::{Nf, Rational, RealInterval};
pub use mpoly::{LinearMap4, MPoly, ProjectivePoint};
pub use scalar::Scalar;

/// Polynomial with coefficients in `K = Q[u]/(u^3 + u^2 - 1)`.
pub type Poly = MPoly<Nf>;
/// Polynomial with rational coefficients.
pub type QPoly = MPoly<Rational>;
pub type Point = ProjectivePoint<Nf>;
pub type Map4 = LinearMap4<Nf>;
