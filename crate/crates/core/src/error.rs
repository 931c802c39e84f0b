use thiserror::Error;

/// Errors raised by the physics kernels and the scenario harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested problem size exceeds a configured memory guard.
    #[error("capacity exceeded: {what} = {requested} > {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    /// A quantity that is analytically bounded escaped its bounds.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Spectra reconstructed by two independent routes disagree.
    #[error("spectral mismatch: {0}")]
    Mismatch(String),
    /// A scenario configuration could not be parsed or validated.
    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
