use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by image IO, fitting, filtering and scoring.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error on {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("no jointly valid pixels")]
    EmptyMask,

    #[error("accumulator holds no pixels; nothing to solve")]
    EmptyAccumulator,

    #[error("attenuation coefficient is zero on the inversion channel")]
    ZeroAttenuation,

    #[error("unknown water preset '{0}'")]
    UnknownPreset(String),

    #[error("manifest error in {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

/// Checks that two rasters share dimensions before a pixel-wise operation.
pub(crate) fn check_dims(aw: usize, ah: usize, bw: usize, bh: usize) -> Result<()> {
    if aw != bw || ah != bh {
        Err(Error::DimensionMismatch(aw, ah, bw, bh))
    } else {
        Ok(())
    }
}
