use thiserror::Error;

use crate::frame::MAX_FRAME_SIZE;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a frame of discernment needs at least one element")]
    EmptyFrame,

    #[error("frame of {0} elements exceeds the supported maximum of {MAX_FRAME_SIZE}")]
    FrameTooLarge(usize),

    #[error("invalid element label {0:?}")]
    InvalidLabel(String),

    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown element label {0:?}")]
    UnknownLabel(String),

    #[error("subset {bits:#b} does not fit a frame of {size} elements")]
    SubsetOutOfFrame { bits: u32, size: usize },

    #[error("operands are defined on different frames")]
    FrameMismatch,

    #[error("invalid mass function: {0}")]
    InvalidMass(String),

    #[error("operation requires a normal mass function but m(∅) = {0}")]
    Subnormal(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidPmf(String),

    #[error("total conflict: the sources share no non-empty intersection")]
    TotalConflict,

    #[error("inversion recovered a negative mass {value} on subset {bits:#b}")]
    Inversion { bits: u32, value: f64 },

    #[error("the full-causality matrix is singular for a frame of {0} elements")]
    UnsupportedDimension(usize),

    #[error("cannot redistribute mass of subset {bits:#b}: no layer weight below it")]
    Redistribution { bits: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
