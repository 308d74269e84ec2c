use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("recurrence table holds {available} coefficients but {requested} were requested")]
    InsufficientCoefficients { requested: usize, available: usize },

    #[error("tridiagonal eigensolver failed to converge on eigenvalue {index} after {iterations} sweeps")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("evaluator failed at s = {s}: {reason}")]
    Evaluator { s: f64, reason: String },

    #[error("{0} requires polynomial-form data; assemble general-form problems by quadrature")]
    UnsupportedForm(&'static str),

    #[error("linear solve failed at node {node} (s = {s}): {reason}, condition estimate {condition:.3e}")]
    NodeSolve {
        node: usize,
        s: f64,
        condition: f64,
        reason: &'static str,
    },

    #[error("Galerkin system of size {dim} is {reason} (condition estimate {condition:.3e}); A(s) may be singular on [-1, 1] or the quadrature order too low")]
    GalerkinSolve {
        dim: usize,
        condition: f64,
        reason: &'static str,
    },

    #[error("matrix is singular at s = {s}")]
    Singular { s: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("pole at {0} lies inside [-1, 1]")]
    PoleInsideDomain(f64),

    #[error("problem file: {0}")]
    Input(String),
}

impl Error {
    /// True for errors caused by malformed input rather than numerics.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Config(_) | Error::Dimension(_))
    }
}
