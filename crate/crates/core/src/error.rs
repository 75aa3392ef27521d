use thiserror::Error;

use crate::report::ValidationReport;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degree {0} lies outside the supported range [-64, 64]")]
    DegreeOutOfRange(i64),
    #[error("duplicate basis label `{label}` in degree {degree}")]
    DuplicateLabel { degree: i32, label: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("differential does not square to zero (first failure at degree {degree})")]
    InvalidComplex { degree: i32 },
    #[error("map does not commute with the differentials (first failure at degree {degree})")]
    NotAChainMap { degree: i32 },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("structure fails validation: {0}")]
    Invalid(ValidationReport),
    #[error("cutoff too large: {0}")]
    CutoffTooLarge(String),
    #[error("filtration index {index} exceeds cutoff {cutoff}")]
    IndexOutOfFiltration { index: usize, cutoff: usize },
    #[error("surjections do not share a target algebra")]
    TargetMismatch,
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
