use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite")]
    NotPositive,

    #[error("trace must be 1, got {0}")]
    TraceNotOne(f64),

    #[error("vector is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("truth value index {index} out of range for d={d}")]
    TruthValueOutOfRange { index: usize, d: usize },

    #[error("invalid local dimension {0} (must be at least 2)")]
    InvalidDimension(usize),

    #[error("invalid number of sites {0} (must be at least 1)")]
    InvalidSites(usize),

    #[error("Hilbert space dimension {0} exceeds the supported maximum of 4096")]
    TooLarge(usize),

    #[error("mixture weights must be nonnegative and sum to 1 (sum {0})")]
    InvalidWeights(f64),

    #[error("operator is not an effect (spectrum must lie in [0, 1])")]
    NotAnEffect,

    #[error("probe value p{index} = {value} lies outside [0, 1]")]
    ProbeOutOfRange { index: usize, value: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed input: {0}")]
    Format(String),
}
