use bandwidth_core::Error;
use thiserror::Error as ThisError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS_VIOLATED: i32 = 2;
pub const EXIT_THEOREM_VIOLATED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_CONFIG: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Consistency(_)
            | Error::NonConvergence { .. }
            | Error::NegativeEigenvector { .. }
            | Error::StepTooLarge { .. } => CliError::Internal(msg),
            _ => CliError::Config(msg),
        }
    }
}
