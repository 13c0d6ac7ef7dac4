use thiserror::Error;

/// Errors produced by code construction, decoding and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("kernel matrix is singular over F2")]
    SingularMatrix,
    #[error("kernel matrix must be square with at least 2 rows, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a word of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("bit values must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} of size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("index range out of bounds: {0}")]
    OutOfRange(String),
    #[error("{n} is not a power of {base}")]
    NotAPower { n: usize, base: usize },
    #[error("invalid flip probability {0}, expected a value in [0, 1/2]")]
    InvalidProbability(f64),
    #[error("decoding width {width} too small: causal cone has {cone} wires, limit {limit}")]
    WidthTooSmall {
        width: usize,
        cone: usize,
        limit: usize,
    },
    #[error("invalid information count K={k} for block length N={n}")]
    InvalidK { k: usize, n: usize },
    #[error("trial count must be at least 1")]
    InvalidTrials,
    #[error("{0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_bits(word: &[u8]) -> Result<()> {
    match word.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidBit(b)),
        None => Ok(()),
    }
}
