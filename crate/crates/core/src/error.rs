use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("truncated file: {0}")]
    Truncation(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot pair channel {0}: no right-hemisphere partner")]
    Pairing(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular interpolation system: {0}")]
    Singularity(String),
    #[error("invalid band: {0}")]
    Band(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("montage has no positions for channel(s): {0}")]
    MissingPositions(String),
    #[error("split error: {0}")]
    Split(String),
    #[error("stratification error: {0}")]
    Stratify(String),
    #[error("training error: {0}")]
    Train(String),
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable numeric code shared by the CLI exit path and the C ABI.
    pub fn code(&self) -> i32 {
        match self {
            Error::Format(_) => 10,
            Error::Truncation(_) => 11,
            Error::Data(_) => 12,
            Error::Io { .. } => 13,
            Error::Pairing(_) => 20,
            Error::Size(_) => 21,
            Error::Domain(_) => 22,
            Error::Singularity(_) => 23,
            Error::Band(_) => 24,
            Error::Param(_) => 25,
            Error::Config(_) => 26,
            Error::MissingPositions(_) => 27,
            Error::Split(_) => 30,
            Error::Stratify(_) => 31,
            Error::Train(_) => 32,
            Error::Input(_) => 33,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
