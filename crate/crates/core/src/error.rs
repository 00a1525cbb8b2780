use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spec: `{field}` {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigensolver did not converge after {iterations} iterations (n = {n}, norm = {norm:.3e})")]
    NoConvergence { iterations: usize, n: usize, norm: f64 },

    #[error("empty spectrum")]
    EmptySpectrum,

    #[error("dimension {n} exceeds the cap of {cap} for this algorithm")]
    DimensionTooLarge { n: usize, cap: usize },

    #[error("dimension {0} is odd; an even dimension is required")]
    OddDimension(usize),

    #[error("diagonal entry {index} is zero; the scaling matrix must be invertible")]
    SingularDiagonal { index: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("extremal diagonal value is degenerate (cluster of size {size}); use the degenerate prediction")]
    DegenerateExtremes { size: usize },

    #[error("neither extremal diagonal value is degenerate")]
    NotDegenerate,

    #[error("density has zero variance")]
    ZeroVariance,

    #[error("density depends on the pair position; pass explicit indices")]
    IndexDependentDensity,
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
