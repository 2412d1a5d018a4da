use crate::prelude::*;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The time step is too coarse for the configured potential or nonlinearity.
    #[error("stability guard violated: {0}")]
    Unstable(String),

    /// A non-finite value showed up during time stepping.
    #[error("numeric abort at frame {frame}: {reason}")]
    NumericAbort { frame: usize, reason: String },

    /// A diagnostic could not be evaluated on the given data.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
