use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient samples: need at least {required}, got {got}")]
    InsufficientSamples { required: usize, got: usize },

    #[error("non-finite value at row {row}, column {col}")]
    InvalidData { row: usize, col: usize },

    #[error("variance of column {index} is zero or negative")]
    DegenerateVariance { index: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigenNoConverge { sweeps: usize },

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("columns do not form an orthonormal basis")]
    InvalidSubspace,

    #[error("argument {value} outside the function domain")]
    DomainError { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
