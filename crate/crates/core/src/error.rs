use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("entry count {got} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, got: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("empty factor list")]
    EmptyList,

    #[error("index {index} out of range (bound {bound})")]
    BadIndex { index: usize, bound: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Hilbert dimension {0} exceeds the dense limit")]
    DimensionTooLarge(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid thermal system: {0}")]
    InvalidSystem(String),

    #[error("energy budget {budget} exceeds the maximum {max}")]
    BudgetExceedsMax { budget: f64, max: f64 },

    #[error("mutual information needs at least two factors")]
    SingleFactor,

    #[error("invalid X-state: {0}")]
    InvalidXState(String),

    #[error("excitation number {m} invalid for {n} qubits")]
    BadExcitation { n: usize, m: usize },

    #[error("fill exponent {exponent} too large for {n} qubits")]
    FillTooLarge { n: usize, exponent: usize },

    #[error("levels are not equally spaced")]
    NotEqualSpacing,

    #[error("circulant weight {index} is negative ({value:e})")]
    NegativeAlpha { index: usize, value: f64 },

    #[error("protocol not applicable: {0}")]
    BadProtocol(String),

    #[error("no entanglement reachable at kT/E = {0}")]
    AboveThreshold(f64),

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
