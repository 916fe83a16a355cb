use thiserror::Error;

/// Errors produced by mesh construction, assembly, and the direct solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("element index {index} out of range (n_elements = {n_elements})")]
    ElementOutOfRange { index: usize, n_elements: usize },

    #[error("invalid polynomial degree: {0}")]
    InvalidDegree(String),

    #[error("unsupported quadrature rule: {0}")]
    UnsupportedQuadrature(String),

    #[error("quadrature too weak: rule is exact to degree {exact}, need {needed}")]
    QuadratureTooWeak { exact: usize, needed: usize },

    #[error("exponent out of range: {0}")]
    InvalidExponent(String),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {x} outside domain [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("expression parse error: {0}")]
    ExprParse(String),

    #[error("manufactured solution rejected: {0}")]
    ConsistencyFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
