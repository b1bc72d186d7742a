use std::fmt;

use mvkit::MvError;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// A failure carrying the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    pub fn not_converged(stage: &str, iterations: usize) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: format!("{stage} did not converge within {iterations} iterations"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Exit code for a library error.
pub fn exit_code(e: &MvError) -> i32 {
    match e {
        MvError::BadParams(_) | MvError::BadSpec(_) | MvError::BadBoundaries(_) | MvError::Kernel(_) => EXIT_USAGE,
        MvError::NumericalFailure { .. } | MvError::ConvergenceFailure { .. } | MvError::NotFitted => EXIT_NUMERICAL,
        _ => EXIT_DATA,
    }
}

impl From<MvError> for CliError {
    fn from(e: MvError) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
