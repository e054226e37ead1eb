use std::process::ExitCode;

use ebsim_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(3),
        }
    }

    pub fn io(what: &str, e: impl std::fmt::Display) -> Self {
        CliError::Runtime(format!("{what}: {e}"))
    }
}

/// Bad parameter values surface from the core as domain or config errors;
/// everything else happened while running.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Config(_) | CoreError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
