use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two values sit closer than the ambiguity tolerance but farther than the
    /// merge tolerance, so no grouping of them is trustworthy.
    #[error("ambiguous grouping: {a} and {b} are {distance:e} apart")]
    AmbiguousGrouping {
        a: Complex64,
        b: Complex64,
        distance: f64,
    },

    #[error("clique certificate mismatch: vertices {u} and {v} are not adjacent")]
    CertificateMismatch { u: usize, v: usize },

    #[error("improper coloring: {0}")]
    ImproperColoring(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("no system of distinct representatives (violating subfamily {violating:?}): {state}")]
    SdrNotFound { violating: Vec<usize>, state: String },

    #[error("matching failure: {0}")]
    MatchingFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
