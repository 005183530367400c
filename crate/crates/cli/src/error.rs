use embgo_core::Error as CoreError;

/// CLI failure classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, names or budgets. Exit status 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Failures while running or writing results. Exit status 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidConfig(_)
            | CoreError::InvalidBounds { .. }
            | CoreError::Dimension { .. }
            | CoreError::Unknown { .. }
            | CoreError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
