use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a structural or range constraint.
    #[error("validation error: {0}")]
    Validation(String),

    /// Input violates the uncertainty principle or a positivity bound.
    #[error("physicality error: {0}")]
    Physicality(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("drift matrix is not stable (max real eigenvalue {max_real:.6e})")]
    Unstable { max_real: f64 },

    #[error("steady-state amplitude is singular: {0}")]
    Singularity(String),

    #[error("unsupported measurement scheme: {0}")]
    UnsupportedScheme(String),

    #[error("step size error: {0}")]
    StepSize(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn physicality(msg: impl Into<String>) -> Self {
        Error::Physicality(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
