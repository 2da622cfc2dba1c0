use thiserror::Error;

/// Failures surfaced by the certification engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("case not applicable: {0}")]
    CaseNotApplicable(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("support enumeration exceeds cap of {cap}")]
    EnumerationOverflow { cap: usize },

    #[error("no stable degree found below scan limit {limit}")]
    ScanLimit { limit: u64 },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
