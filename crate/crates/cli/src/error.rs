use thiserror::Error;

/// Failures that stop a command before it produces a result. Property
/// violations and non-convergence are not errors: the result is still
/// written and the exit code reports them.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}:{column}: {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] kakeya_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(kakeya_core::Error::CellBudget { .. }) => 3,
            _ => 1,
        }
    }
}
