use thiserror::Error;

/// Errors raised by the library. Check failures are not errors; they are
/// reported as items of a [`crate::ValidationReport`] or as `false` results.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("element does not match algebra: {0}")]
    SpecMismatch(String),

    #[error("invalid algebra specification: {0}")]
    InvalidAlgebra(String),

    #[error("sign must be +1 or -1, got {0}")]
    InvalidSign(i64),

    #[error("triple has no real structure")]
    NoRealStructure,

    #[error("triple has no grading")]
    NoGrading,

    #[error("invalid twisting operator: {0}")]
    InvalidTwistOperator(String),

    #[error("doubled representation is not faithful (rank {rank} < {expected})")]
    NotFaithful { rank: usize, expected: usize },

    #[error("operator is not a twisted one-form (projection residual {residual:e})")]
    NotAOneForm { residual: f64 },

    #[error("no Hermitian invertible element found in the implementer space")]
    NoHermitianInvertible,

    #[error("operator is singular (smallest |eigenvalue| {lambda_min:e})")]
    Singular { lambda_min: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Majorana mass must be nonzero")]
    InvalidMass,

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("matrix shape error at {path}: {message}")]
    MatrixShape { path: String, message: String },

    #[error("unknown built-in model '{0}'")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
