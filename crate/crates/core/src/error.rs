use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("state is not normalized: |norm - 1| = {deviation:e} exceeds tolerance {tol:e}")]
    Normalization { deviation: f64, tol: f64 },
    #[error("dimension {got} is too small (need at least {min})")]
    DimensionTooSmall { got: usize, min: usize },
    #[error("invalid spin {0}: 2j must be a positive integer")]
    InvalidSpin(f64),
    #[error("truncation tail {tail:e} exceeds budget {budget:e} at dimension {dim}")]
    Truncation { tail: f64, budget: f64, dim: usize },
    #[error("kernel is not one-dimensional: smallest singular values {smallest:e}, {next:e}")]
    Kernel { smallest: f64, next: f64 },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("finite-difference step {0:e} outside the supported range")]
    Step(f64),
    #[error("no closed form at base point {0}")]
    UnsupportedBasePoint(num_complex::Complex64),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),
    #[error("degenerate orbit point: t = 0")]
    DegenerateOrbit,
    #[error("quadrature did not converge: refinement changed value by {change:e} (tolerance {tol:e})")]
    Quadrature { change: f64, tol: f64 },
}
