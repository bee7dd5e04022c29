use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("operation requires a nonempty map")]
    Empty,
    #[error("index {index} out of range for map of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("key order violated: {0}")]
    Order(String),
    #[error("size field inconsistent: {0}")]
    Size(String),
    #[error("balance condition violated: {0}")]
    Balance(String),
    #[error("cached augmented value differs from recomputation: {0}")]
    Aug(String),
}
