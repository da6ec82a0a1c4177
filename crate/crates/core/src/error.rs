use thiserror::Error;

/// Errors raised by field construction, graph builders and counting routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} exceeds cap: {got} > {limit}")]
    CapExceeded { what: &'static str, got: u128, limit: u128 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("degenerate form matrix")]
    DegenerateForm,
    #[error("quadratic form matrix is not symmetric")]
    AsymmetricQuadratic,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lambda must be nonzero for this family")]
    ZeroLambda,
    #[error("zero vector has no line class")]
    ZeroVector,
    #[error("unit sphere is empty")]
    EmptySphere,
    #[error("relation assignment is ambiguous for pair ({0}, {1})")]
    AmbiguousRelation(usize, usize),
    #[error("unknown color {0}")]
    UnknownColor(u32),
    #[error("certificate does not belong to this graph")]
    StaleCert,
    #[error("set contains zero")]
    ZeroInSet,
    #[error("element literal is malformed: {0}")]
    BadLiteral(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, got: u128, limit: u128) -> Self {
        Error::CapExceeded { what, got, limit }
    }

    /// True for size-cap and budget violations.
    pub fn is_cap_violation(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
