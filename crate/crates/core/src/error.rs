use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("parse error at {line}:{col}: {msg}")]
    ParseAt { line: usize, col: usize, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported kernel operation: {0}")]
    UnsupportedKernel(String),
    #[error("system has no {0} form")]
    MissingForm(&'static str),
    #[error("support {0} lies outside the window")]
    OutsideWindow(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("flag not stable under the real structure; witness member {0}")]
    NotTauStable(String),
    #[error("unknown real form `{0}`")]
    UnknownRealForm(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
