use mrc_core::MrcError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("bad coefficient file: {0}")]
    Format(String),
    #[error("solver failure: {0}")]
    Solver(#[from] MrcError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Process exit status: 1 for bad input, 2 for solver or output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Format(_) => 1,
            CliError::Solver(_) | CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }
}

/// Exit status of a run that finished without reaching its target.
pub const EXIT_UNCONVERGED: i32 = 3;

pub type CliResult<T> = Result<T, CliError>;
