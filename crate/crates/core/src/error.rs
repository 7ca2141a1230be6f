use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported argument: {0}")]
    UnsupportedArgument(String),

    #[error("site ({m}, {n}) has negligible probability; conditional state undefined")]
    UndefinedSite { m: i64, n: i64 },

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("degenerate spinor: p0 = 0 at p = {p}, m = {m}")]
    DegenerateSpinor { p: f64, m: f64 },
}

pub type Result<T> = std::result::Result<T, WalkError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(WalkError::InvalidArgument(msg.into()))
}
