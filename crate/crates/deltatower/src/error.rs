use thiserror::Error;

/// Failures that stop a command before its report is complete.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments or input files.
    #[error("usage: {0}")]
    Usage(String),
    /// Input that is well formed but over a configured limit.
    #[error("refused: {0}")]
    Refused(String),
    /// A computation hit a domain error (zero initial value, non-invertible series).
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 for computations that ran and failed, 2 for anything refused up front.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Computation(_) => 1,
            CliError::Usage(_) | CliError::Refused(_) | CliError::Io { .. } => 2,
        }
    }

    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}
