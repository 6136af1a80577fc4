use thiserror::Error;

use tsch_delay::{ModelError, SimError};

/// Exit codes of the `tsch-delay` binary.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// `validate` found an analytical bound below the simulated estimate.
    pub const VALIDATION_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    /// `bound` ran, but the flow is unstable on the path.
    pub const UNSTABLE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Output(_) => exit::INPUT,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Numerics(n) => CliError::Numerical(n.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
