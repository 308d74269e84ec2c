//! Polynomial approximation of the solution `x(s)` of a parameterized
//! linear system `A(s) x(s) = b(s)` for `s ∈ [-1, 1]`.
//!
//! Two spectral methods are provided. The pseudospectral method solves the
//! system at Gauss nodes and converts the node values into orthonormal
//! polynomial coefficients ([`pseudospectral`]). The spectral Galerkin
//! method solves one coupled system for the coefficients ([`galerkin`]).
//! The coupled system can be assembled by quadrature or exactly from
//! functions of Jacobi matrices. [`analysis`] holds residual and error
//! norms and geometric-rate fitting. [`demos`] reproduces the two
//! reference problems.

pub mod analysis;
pub mod demos;
pub mod error;
pub mod galerkin;
pub mod linalg;
pub mod orthopoly;
pub mod paramops;
pub mod problem;
pub mod pseudospectral;

pub use error::{Error, Result};
pub use orthopoly::{Family, GaussDecomposition, QuadratureRule, RecurrenceTable};
pub use paramops::{ParamMatrix, ParamVector};
pub use pseudospectral::{Method, SpectralSolution};
