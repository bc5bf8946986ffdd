use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("field order {p}^{h} exceeds the bound {max}")]
    OrderTooLarge { p: u32, h: u32, max: u64 },
    #[error("codec {codec} out of range for a field of order {q}")]
    CodecOutOfRange { codec: u64, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{s} is not the order of a subfield of GF({q})")]
    NotSubfield { s: u32, q: u32 },
    #[error("a point has no direction to itself")]
    SamePoint,
    #[error("the point set determines no direction")]
    NoDirections,
    #[error("the point set is empty")]
    EmptySet,
    #[error("set of {n} points exceeds the field order {q}")]
    TooManyPoints { n: usize, q: u32 },
    #[error("every direction is determined")]
    AllDirections,
    #[error("singular collineation matrix")]
    SingularMatrix,
    #[error("direction {0} is not determined by the set")]
    UndeterminedDirection(String),
    #[error("projection center meets the canonical subgeometry")]
    CenterMeetsSubgeometry,
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid linear set: {0}")]
    InvalidSpec(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal invariant violated: {0}")]
    Soundness(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Internal invariant failures, as opposed to bad input.
    pub fn is_soundness_alarm(&self) -> bool {
        matches!(self, Error::Soundness(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
