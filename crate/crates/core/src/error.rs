use thiserror::Error;

/// Errors produced by the coding and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("alist parse error on line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
