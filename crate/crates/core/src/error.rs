use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// `OutOfValidity`, `IndeterminateRank` and `PresentationMismatch` are refusals:
/// the engine declines to output a number it cannot justify. The remaining
/// variants are usage errors or internal consistency failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cone space: {0}")]
    InvalidSpace(String),

    #[error("cohomological degree {degree} outside [0, {max}]")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("out of validity domain: {0}")]
    OutOfValidity(String),

    #[error("indeterminate rank for {map}: {detail}")]
    IndeterminateRank { map: String, detail: String },

    #[error("presentation mismatch for {what}: presented dimension {presented}, expected {expected}")]
    PresentationMismatch {
        what: String,
        presented: usize,
        expected: usize,
    },

    #[error("Hom^{degree} on {pair} has dimension {dim}, expected concentration in degree 0")]
    HigherDegree { pair: String, degree: usize, dim: usize },

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("inconsistent computation: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl Error {
    /// True for the refusals a caller should report as "engine declined".
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::OutOfValidity(_)
                | Error::IndeterminateRank { .. }
                | Error::PresentationMismatch { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ill-defined map: {0}")]
    IllDefined(String),

    #[error("boundaries are not contained in cycles")]
    BoundariesNotInCycles,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
