use thiserror::Error;

/// Errors raised anywhere in the compilation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has no nonzero entries")]
    EmptyMatrix,
    #[error("matrix dimension {0} is not a power of two")]
    BadDimension(usize),
    #[error("entry ({row}, {col}) is outside a {dim}x{dim} matrix")]
    EntryOutOfRange { row: usize, col: usize, dim: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("invalid gate: {0}")]
    BadGate(String),
    #[error("circuit on {qubits} qubits exceeds the dense simulation limit of {limit}")]
    TooLarge { qubits: usize, limit: usize },
    #[error("data vector has no nonzero items")]
    EmptyData,
    #[error("control set of size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("control set does not fuse into a single MCX")]
    NotReducible,
    #[error("invalid expansion: {0}")]
    BadExpansion(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("basis states {a:#b} and {b:#b} differ in more than one bit")]
    NotAdjacent { a: u64, b: u64 },
    #[error("no routing path from {from:#b} to {to:#b}")]
    Unroutable { from: u64, to: u64 },
    #[error("shift amount {amount} is out of range for a {dim}-row register")]
    BadShift { amount: usize, dim: usize },
    #[error("unitary of dimension {dim} does not match layout ({expected})")]
    BadLayout { dim: usize, expected: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
