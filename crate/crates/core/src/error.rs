use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grid of {cells_per_side}^{dim} cells exceeds the cell budget of {budget}")]
    CellBudget {
        cells_per_side: usize,
        dim: usize,
        budget: u64,
    },

    #[error("singular frame: |det| = {0:e}")]
    SingularFrame(f64),

    #[error("direction {index} of family {axis} lies in no cap")]
    Uncovered { axis: usize, index: usize },

    #[error("numeric underflow: {0}")]
    Underflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
