use thiserror::Error;

/// Errors raised by the numerical kernels, the estimator and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite ({0})")]
    NotPositiveDefinite(String),

    #[error("matrix is indefinite: most negative eigenvalue {min_eigenvalue:e} (tolerance {tolerance:e})")]
    Indefinite { min_eigenvalue: f64, tolerance: f64 },

    #[error("{what} did not converge after {iterations} iterations (last value {last:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        last: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Convergence { .. }
            | Error::NotPositiveDefinite(_)
            | Error::Indefinite { .. } => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
