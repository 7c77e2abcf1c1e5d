use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation undefined for the zero element")]
    ZeroElement,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("the prime 2 is ramified in the Hurwitz algebra and is not allowed here")]
    EvenPrime,

    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),

    #[error("c = {c} < 1: closed forms for f1/f2 are only available when c >= 1")]
    CLessThanOne { c: String },

    #[error("requested precision {requested} exceeds the configured maximum {max}")]
    PrecisionOverflow { requested: u32, max: u32 },

    #[error("insufficient p-adic precision at p = {p}: need {needed} digits, have {available}")]
    InsufficientPrecision { p: u64, needed: i64, available: i64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("neighbor coverage failed at p = {p}: {missing} of {total} neighbors not reached")]
    CoverageFailure { p: u64, missing: usize, total: usize },

    #[error("product-tree search left {unreached} vertices of the radius-{radius} ball unreached")]
    UnreachedVertex { radius: u32, unreached: usize },

    #[error("witness for vertex {vertex} does not map the base vertex onto it")]
    WitnessMismatch { vertex: String },

    #[error("relator {name} does not evaluate to a central element")]
    NonCentralRelator { name: String },

    #[error("unit group check failed: {0}")]
    ClosureFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors meaning a mathematical check came out false, as
    /// opposed to bad input or a precision problem.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::CoverageFailure { .. }
                | Error::UnreachedVertex { .. }
                | Error::WitnessMismatch { .. }
                | Error::NonCentralRelator { .. }
                | Error::ClosureFailure(_)
        )
    }
}
