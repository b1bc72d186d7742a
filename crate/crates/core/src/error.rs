use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by validation, fitting and IO.
#[derive(Debug, Error)]
pub enum MvError {
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value in view {view} at row {row}, column {col}")]
    NonFinite { view: usize, row: usize, col: usize },
    #[error("expected {expected} views, got {got}")]
    ViewCount { expected: String, got: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid specification: {0}")]
    BadSpec(String),
    #[error("invalid split boundaries: {0}")]
    BadBoundaries(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("numerical failure in {stage}: {detail}")]
    NumericalFailure { stage: String, detail: String },
    #[error("{stage} did not converge within {iterations} iterations")]
    ConvergenceFailure { stage: String, iterations: usize },
    #[error("estimator is not fitted")]
    NotFitted,
    #[error("invalid kernel: {0}")]
    Kernel(String),
    #[error("sample {row} has zero norm in view {view}")]
    ZeroRow { view: usize, row: usize },
    #[error("co-training needs exactly two classes, found {0}")]
    NotBinary(usize),
    #[error("no labeled examples: {0}")]
    NoLabeled(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {file} at line {line}, column {column}: {msg}")]
    Parse {
        file: String,
        line: u64,
        column: usize,
        msg: String,
    },
}

impl MvError {
    pub(crate) fn numerical(stage: &str, detail: impl Into<String>) -> Self {
        MvError::NumericalFailure {
            stage: stage.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MvError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = MvError> = std::result::Result<T, E>;
