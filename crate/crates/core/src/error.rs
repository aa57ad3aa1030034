use thiserror::Error;

/// Errors produced anywhere in the compile/evaluate pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HsimError {
    /// Malformed Hamiltonian text; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// The request exceeds what the dense simulator supports.
    #[error("capability limit: {0}")]
    Capability(String),

    /// A numerical self-check failed; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl HsimError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        HsimError::Input(msg.into())
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            HsimError::Parse { .. } | HsimError::Input(_) => 2,
            HsimError::Capability(_) => 3,
            HsimError::Internal(_) => 4,
        }
    }
}

pub type Result<T, E = HsimError> = std::result::Result<T, E>;
