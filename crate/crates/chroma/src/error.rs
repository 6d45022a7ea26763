use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChromaError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt WAV header: {0}")]
    CorruptHeader(String),
    #[error("audio too short: {len} samples, window needs {window}")]
    TooShort { len: usize, window: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("wav encoder: {0}")]
    Encode(String),
}

pub type Result<T> = std::result::Result<T, ChromaError>;
