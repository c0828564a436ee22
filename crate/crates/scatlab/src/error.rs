use thiserror::Error;

/// Error taxonomy shared by all modules. Each variant maps to a stable CLI
/// exit code, see `crate::cli_exit_code`.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),
    #[error("domain-error: {0}")]
    Domain(String),
    #[error("invalid-shape: {0}")]
    InvalidShape(String),
    #[error("solver-failure: {0}")]
    SolverFailure(String),
    #[error("invalid-grid: {0}")]
    InvalidGrid(String),
    #[error("incomplete-data: {0}")]
    IncompleteData(String),
    #[error("insufficient-bandwidth: {0}")]
    InsufficientBandwidth(String),
    #[error("unreliable-s: {0}")]
    UnreliableS(String),
    #[error("step-too-large: {0}")]
    StepTooLarge(String),
    #[error("invalid-iterate: {0}")]
    InvalidIterate(String),
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    #[error("input-not-found: {0}")]
    InputNotFound(String),
    #[error("parse-error: {0}")]
    Parse(String),
    #[error("io-error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Stable exit code for scripting against the CLI.
pub fn cli_exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => 2,
        Error::Domain(_) => 2,
        Error::InvalidShape(_) => 3,
        Error::SolverFailure(_) => 4,
        Error::InvalidGrid(_) => 5,
        Error::IncompleteData(_) => 6,
        Error::InsufficientBandwidth(_) => 7,
        Error::UnreliableS(_) => 8,
        Error::StepTooLarge(_) => 9,
        Error::InvalidIterate(_) => 10,
        Error::NonConvergence(_) => 11,
        Error::InputNotFound(_) => 12,
        Error::Parse(_) => 13,
        Error::Io(_) => 14,
    }
}
