use thiserror::Error;

/// Errors raised by the library. `is_validation` separates bad input from
/// failures during computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dense size {entries} exceeds cap {cap}")]
    SizeCap { entries: u128, cap: u128 },
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("unsupported input form: {0}")]
    UnsupportedForm(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("exact arithmetic overflow")]
    Overflow,
    #[error("no mobile element on this path")]
    NoMobileElement,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than by computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidShape(_)
                | Error::InvalidArgument(_)
                | Error::Parse(_)
                | Error::SizeCap { .. }
                | Error::Mismatch(_)
                | Error::UnsupportedForm(_)
                | Error::NoMobileElement
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
