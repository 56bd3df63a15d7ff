use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid projection class P[{j},{k}] over n = {n}: {reason}")]
    InvalidClass {
        n: i64,
        j: i64,
        k: String,
        reason: &'static str,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: i64, max: i64 },
    #[error("operation needs n >= 1")]
    DimensionTooSmall,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("no K0 coordinates for line bundle of degree {0} (only k >= -1 is supported)")]
    UnsupportedDegree(i64),
    #[error("not a groupoid element: {0}")]
    NotInGroupoid(String),
    #[error(
        "elements are not composable: source of the left factor differs from target of the right"
    )]
    NotComposable,
    #[error("element has degree {0}, expected 0")]
    DegreeNonZero(i64),
    #[error("element outside the domain stratum: {0}")]
    WrongStratum(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
