use thiserror::Error;

/// Errors produced by the `ncosc-core` routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time {t} outside the window [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("grid of {requested} points exceeds the budget of {cap} points")]
    ResourceLimit { requested: usize, cap: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
