use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, got {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid triple space: {0}")]
    InvalidSpace(String),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("element is not a tripotent (residual {residual:e})")]
    NotTripotent { residual: f64 },

    #[error("pseudo-inverse of the zero element is undefined")]
    ZeroElement,

    #[error("element is not in the Peirce 2-space of the tripotent (residual {residual:e})")]
    NotInPeirceSpace { residual: f64 },

    #[error("degenerate tripotent frame: {0}")]
    DegenerateFrame(String),

    #[error("partition of length {length} exceeds the bound {bound}")]
    PartitionTooLong { length: usize, bound: usize },

    #[error("pole of the Gamma function at argument {argument}")]
    Pole { argument: f64 },

    #[error("series tail estimate {tail:e} exceeds the tolerance {tolerance:e}")]
    Convergence { tail: f64, tolerance: f64 },

    #[error("point lies outside the chart range (smallest leading singular value {sigma_min:e})")]
    OutOfChart { sigma_min: f64 },

    #[error("element is not of rank lambda within the chart (residual {residual:e})")]
    NotRankLambda { residual: f64 },

    #[error("collocation system is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("numerical domain error: {0}")]
    Domain(String),

    #[error("invalid coefficient sequence: {0}")]
    InvalidCoefficients(String),
}

pub type Result<T> = std::result::Result<T, Error>;
