use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Zero-energy input handed to coefficient estimation.
    #[error("degenerate signal: autocorrelation r[0] = {r0} is not positive")]
    DegenerateSignal { r0: f64 },

    /// Levinson-Durbin hit a reflection coefficient with magnitude >= 1.
    #[error("ill-conditioned autocorrelation at stage {stage}: reflection coefficient {reflection}")]
    IllConditioned { stage: usize, reflection: f64 },

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("stream contract violated: {0}")]
    StreamContract(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("degenerate mix: {0}")]
    DegenerateMix(String),

    #[error("unsupported audio format: {0}")]
    Format(String),

    #[error("record {index}: {source}")]
    Record {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed {what}: {reason}")]
    Parse { what: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
