use thiserror::Error;

/// Errors produced by the expohedron algorithms and the file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The point is not majorized by the exposure vector of the model.
    #[error("point lies outside the expohedron (worst prefix violation {violation:.3e})")]
    OutsidePolytope { violation: f64 },

    #[error("ray never leaves the polytope: direction has no descending prefix")]
    UnboundedRay,

    #[error("target exposure is not ordered like the relevance vector (items {lower} and {higher})")]
    ZoneMismatch { lower: usize, higher: usize },

    #[error("numeric degeneracy at step {step}: {detail} (splits {splits:?})")]
    NumericDegeneracy {
        step: usize,
        splits: Vec<usize>,
        detail: String,
    },

    #[error("n = {n} exceeds the enumeration cap of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, ExpoError>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(ExpoError::DimensionMismatch { expected, got })
    }
}
