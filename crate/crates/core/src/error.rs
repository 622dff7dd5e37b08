use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range 1..={nvars}")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("component {component} does not have identity linear part")]
    NonIdentityLinearPart { component: usize },

    #[error("component {component} has a nonzero constant term")]
    NonzeroConstant { component: usize },

    #[error("invalid degree {found}: {reason}")]
    InvalidDegree { found: u32, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed reduction record: {0}")]
    MalformedRecord(String),

    #[error("invalid split: n' = {nprime} exceeds n = {n}")]
    InvalidSplit { nprime: usize, n: usize },

    #[error("no polynomial solution of degree <= {cutoff}")]
    NotPolynomial { cutoff: u32 },

    #[error("division by a series with zero constant term")]
    NonUnitSeries,

    #[error("resource limit exceeded: {what} ({found} > {limit})")]
    ResourceLimit {
        what: &'static str,
        found: u128,
        limit: u128,
    },

    #[error("computation cancelled at degree {degree}")]
    Cancelled { degree: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. } | Error::Cancelled { .. })
    }

    pub(crate) fn limit(what: &'static str, found: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::ResourceLimit {
            what,
            found: found.into(),
            limit: limit.into(),
        }
    }
}
