use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator series has zero constant term")]
    ZeroConstantTerm,
    #[error("invalid curve data: {0}")]
    InvalidCurve(String),
    #[error("point counts do not define a valid Weil numerator: {0}")]
    InvalidCounts(String),
    #[error("point count N_{index} = {value} is negative")]
    NegativeCount { index: usize, value: String },
    #[error("zeta function has a pole at q^-{j}; need j >= 2")]
    Pole { j: i64 },
    #[error("P_X(1) = {0} is not a positive integer")]
    NonIntegerClassNumber(Rational),
    #[error("expected an integer, got {value} ({context})")]
    NotIntegral { context: String, value: Rational },
    #[error("degree {n} is outside the range n > {bound} where the count is valid")]
    Range { n: i64, bound: i64 },
    #[error("flag type {parts:?} does not sum to rank {rank}")]
    RankMismatch { rank: usize, parts: Vec<usize> },
    #[error("{flags} flag types given for {marked} marked points")]
    PointCountMismatch { flags: usize, marked: usize },
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("{0} is not prime; enumeration oracles need a prime field")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
}

impl Error {
    /// Stable machine-readable name, used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroConstantTerm => "ZeroConstantTerm",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::InvalidCounts(_) => "InvalidCounts",
            Error::NegativeCount { .. } => "NegativeCount",
            Error::Pole { .. } => "PoleError",
            Error::NonIntegerClassNumber(_) => "NonIntegerClassNumber",
            Error::NotIntegral { .. } => "NotIntegral",
            Error::Range { .. } => "RangeError",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::PointCountMismatch { .. } => "PointCountMismatch",
            Error::TooLarge(_) => "TooLarge",
            Error::NotPrime(_) => "NotPrime",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::OracleMismatch(_) => "OracleMismatch",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
