use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field of size {p}^{m} exceeds the limit of {limit} elements")]
    DegreeTooLarge { p: u64, m: u32, limit: u64 },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("precision mismatch: residues modulo {p}^{left} and {p}^{right}")]
    PrecisionMismatch { p: u64, left: u32, right: u32 },

    #[error("{0} is not a unit modulo p")]
    NotAUnit(u64),

    #[error(
        "precision {precision} insufficient: bound {bound} at index {index} lies below the hull value {hull}; retry with precision {suggested}"
    )]
    PrecisionInsufficient {
        index: usize,
        bound: String,
        hull: String,
        precision: u32,
        suggested: u32,
    },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid hypergeometric datum: {0}")]
    InvalidDatum(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),

    #[error("rank {n} requires p > {n}, got p = {p}")]
    RankTooLargeForP { p: u64, n: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("root datum mismatch: {0}")]
    DatumMismatch(String),

    #[error("difference of coweights is not in the span of the simple coroots")]
    NotInCorootSpan,

    #[error("coweight is not dominant (pairing with simple root {0} is negative)")]
    NotDominant(usize),

    #[error("unsupported root datum: {0}")]
    UnsupportedDatum(String),

    #[error("recovered slopes are not descending")]
    NonConvexInput,

    #[error("invalid c3 = {c3} for p = {p}")]
    InvalidC3 { p: u64, c3: u64 },

    #[error("prime {0} is too small for this family")]
    PrimeTooSmall(u64),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

impl Error {
    /// True for errors that indicate bad arguments rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::MalformedInput(_)
                | Error::InvalidDatum(_)
                | Error::InvalidPoint(_)
                | Error::InvalidC3 { .. }
                | Error::PrimeTooSmall(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::PrecisionMismatch { .. } => "PrecisionMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::PrecisionInsufficient { .. } => "PrecisionInsufficient",
            Error::MalformedInput(_) => "MalformedInput",
            Error::InvalidDatum(_) => "InvalidDatum",
            Error::InvalidPoint(_) => "InvalidPoint",
            Error::StrategyUnavailable(_) => "StrategyUnavailable",
            Error::RankTooLargeForP { .. } => "RankTooLargeForP",
            Error::Inconsistent(_) => "Inconsistent",
            Error::DatumMismatch(_) => "DatumMismatch",
            Error::NotInCorootSpan => "NotInCorootSpan",
            Error::NotDominant(_) => "NotDominant",
            Error::UnsupportedDatum(_) => "UnsupportedDatum",
            Error::NonConvexInput => "NonConvexInput",
            Error::InvalidC3 { .. } => "InvalidC3",
            Error::PrimeTooSmall(_) => "PrimeTooSmall",
            Error::Io(_) => "Io",
            Error::Checkpoint(_) => "Checkpoint",
        }
    }
}
