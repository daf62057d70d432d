use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error(transparent)]
    Model(#[from] ModelFormatError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Csv { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Binary PGM decoding failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("bad PGM magic {0:?}, expected \"P5\"")]
    BadMagic(String),
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported PGM maxval {0}, expected 255")]
    UnsupportedMaxval(u32),
    #[error("PGM has zero dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("truncated PGM payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

/// Model file decoding failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelFormatError {
    #[error("bad model magic line {0:?}")]
    BadMagic(String),
    #[error("unsupported model version {0:?}")]
    Version(String),
    #[error("malformed model field: {0}")]
    Malformed(String),
    #[error("model payload has {found} weights, header declares dim={declared}")]
    Payload { declared: usize, found: usize },
}
