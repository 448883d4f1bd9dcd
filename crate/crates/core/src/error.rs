use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZonoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vector is not unit length (|u| = {norm})")]
    NotUnit { norm: f64 },

    #[error("generator set is not full-dimensional (rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },

    #[error("generators are not in general position: subset {subset:?} is linearly dependent")]
    GeneralPosition { subset: Vec<usize> },

    #[error("enumeration too large: {operation} needs {required} evaluations (limit {limit}); pass an override to proceed")]
    EnumerationBound {
        operation: &'static str,
        required: f64,
        limit: f64,
    },

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("unknown {kind} `{name}`; available: {available}")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, ZonoError>;

pub(crate) fn out_of_range(what: &'static str, value: impl ToString, allowed: impl ToString) -> ZonoError {
    ZonoError::OutOfRange {
        what,
        value: value.to_string(),
        allowed: allowed.to_string(),
    }
}
