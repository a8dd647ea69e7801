use thiserror::Error;

/// Errors raised by the simulation kernel and everything built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    #[error("operator of dimension {dim} needs {bytes} bytes, over the {cap} byte cap")]
    MemoryCap { dim: usize, bytes: u128, cap: u128 },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear system too large: {unknowns} unknowns (limit {limit})")]
    SystemTooLarge { unknowns: usize, limit: usize },

    #[error("target value {target} is not attainable: {reason}")]
    Unattainable { target: f64, reason: String },

    #[error("model/input mismatch: {0}")]
    InputMismatch(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("graphs are isomorphic or produce indistinguishable states: {0}")]
    Indistinguishable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
