use std::fmt;

use bellwalk::WalkError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration.
    Usage(String),
    /// The state lost normalization during a run.
    NormDrift { t: usize, norm: f64 },
    /// Output was written but some samples diverged.
    Divergence(String),
    /// A check ran to completion and did not pass.
    CheckFailed(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NormDrift { .. } => 3,
            CliError::Divergence(_) => 4,
            CliError::CheckFailed(_) | CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::NormDrift { t, norm } => write!(f, "norm drift at t = {t}: |psi|^2 = {norm:.17e}"),
            CliError::Divergence(m) => write!(f, "divergence: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::InvalidArgument(_) | WalkError::UnsupportedArgument(_) => CliError::Usage(e.to_string()),
            WalkError::Divergence(_) => CliError::Divergence(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
