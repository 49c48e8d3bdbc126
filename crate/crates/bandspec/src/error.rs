use thiserror::Error;

/// Errors reported by fallible library operations.
///
/// Most operations here are total; the error cases are argument-level
/// (bad intervals, bad parameters) or structural (a section that is not
/// tridiagonal handed to the tridiagonal eigensolver).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: left endpoint {a} must not exceed right endpoint {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("interval must be nondegenerate: {a} >= {b}")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("window width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("grid resolution must be positive, got {0}")]
    NonPositiveResolution(f64),

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("affine scale must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("schedule needs at least 3 strictly increasing positive sizes")]
    InvalidSchedule,

    #[error("section has entries beyond the first off-diagonal band; the eigensolver requires a tridiagonal matrix")]
    NotTridiagonal,

    #[error("band offsets must be >= 1, got 0")]
    ZeroBandOffset,

    #[error("periodic diagonal sequence needs at least one value")]
    EmptyPeriod,

    #[error("moment order {got} exceeds the supported maximum {max}")]
    MomentOrderTooLarge { got: usize, max: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("off-diagonal length {got} does not match dimension {dim} (expected {expected})")]
    BandLengthMismatch {
        dim: usize,
        got: usize,
        expected: usize,
    },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("grid must contain at least one point")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
