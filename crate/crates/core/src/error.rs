use thiserror::Error;

/// Errors surfaced by the engine. Pure computations on valid inputs do not
/// fail; errors signal malformed inputs or violated contracts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(crate::Ring, crate::Ring),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("entry is not an element of {0}: {1}")]
    NotInRing(crate::Ring, String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid filtration: {0:?}")]
    InvalidFiltration(Vec<crate::filtered::Violation>),

    #[error("interval [{0}, {1:?}) is empty or reversed")]
    BadInterval(i64, Option<i64>),

    #[error("filtration step at weight {weight}, degree {degree} is not saturated; a free presentation does not exist")]
    NotSaturated { weight: i64, degree: i64 },

    #[error("no solution to an exact linear system: {0}")]
    NoSolution(String),

    #[error("invalid CW complex: {0}")]
    InvalidCw(String),

    #[error("invalid differential graded algebra: {0:?}")]
    InvalidDga(Vec<crate::multiplicative::DgaViolation>),

    #[error("{0}")]
    Other(String),
}
