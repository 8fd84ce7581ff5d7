use esp_core::Error as CoreError;

/// Failures mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input-error",
            CliError::Infeasible(_) => "infeasible",
        }
    }

    /// Core error raised while reading `location`.
    pub fn at(location: &str, e: CoreError) -> CliError {
        let msg = format!("{location}: {e}");
        match e {
            CoreError::Infeasible(_) | CoreError::Unbalanced(_) => CliError::Infeasible(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Infeasible(_) | CoreError::Unbalanced(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
