use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    /// Internal error, malformed input, or a requested check that failed.
    pub const FAILURE: u8 = 1;
    pub const PRECONDITION: u8 = 2;
    pub const BUDGET: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cdsp_core::Error),

    /// Input that does not match the documented schema. `pointer` is an RFC
    /// 6901 JSON pointer to the offending value.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("invalid JSON in {path}: {message}")]
    Syntax { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(cdsp_core::Error::PreconditionViolated { .. })
            | CliError::Core(cdsp_core::Error::DegenerateDensity { .. }) => exit::PRECONDITION,
            CliError::Core(cdsp_core::Error::NumericalBudget { .. }) => exit::BUDGET,
            _ => exit::FAILURE,
        }
    }

    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { pointer: pointer.into(), message: message.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
