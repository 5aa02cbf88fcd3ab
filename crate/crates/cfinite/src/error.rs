use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial does not split over the rationals")]
    NotSplitOverRationals,
    #[error("zero is a root (constant term vanishes)")]
    ZeroRoot,
    #[error("no recurrence fits the given terms")]
    NoRecurrenceFound,
    #[error("only recurrences with a vanishing leading or trailing coefficient fit the terms")]
    DegenerateLeadingOrTrailingCoefficient,
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
