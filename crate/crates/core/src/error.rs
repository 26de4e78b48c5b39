use std::io;

use thiserror::Error;

/// Errors produced by the watermarking library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("bad magic: expected {expected}")]
    BadMagic { expected: &'static str },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),

    #[error("truncated data: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("unsupported side-info version {0}")]
    VersionMismatch(u32),

    #[error("corrupt side info: {0}")]
    CorruptSideInfo(String),

    #[error("invalid dimensions: {0}")]
    Dimensions(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("unknown attack `{0}`")]
    UnknownAttack(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
