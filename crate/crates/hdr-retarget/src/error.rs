use std::path::PathBuf;

/// Error type shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("no images found in `{0}`")]
    EmptyStack(PathBuf),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("failed to decode `{path}`: {source}")]
    Decode {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("failed to encode image: {0}")]
    Encode(#[from] image::ImageError),

    #[error("image too small: {width}x{height}, need at least {min}x{min}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },

    #[error("width {0} too small to remove a seam")]
    WidthTooSmall(usize),

    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("empty input sequence")]
    EmptyInput,

    #[error("cannot insert {requested} seams into width {width}")]
    TooManySeams { requested: usize, width: usize },

    #[error("pyramid depth {requested} exceeds maximum {max} for this image")]
    TooManyLevels { requested: usize, max: usize },

    #[error("inconsistent traces: {0}")]
    InconsistentTraces(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
