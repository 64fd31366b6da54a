use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the symbol calculus, quadrature and determinant pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular symbol: {0}")]
    Singular(String),

    #[error("branch error: {0}")]
    Branch(String),

    #[error("boundary condition is not elliptic in this direction: {0}")]
    NonElliptic(String),

    #[error("contour error: {0}")]
    Contour(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}, value {value})")]
    Accuracy { value: Complex64, estimate: f64, tol: f64 },

    #[error("evaluation produced a non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
