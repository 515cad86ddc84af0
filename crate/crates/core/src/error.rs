use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty range: start {start} is past end {end}")]
    EmptyRange { start: u64, end: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("sequence value is not positive at n = {n}")]
    Positivity { n: u64 },

    #[error("tabulated sequence has no value for n = {n}")]
    MissingValue { n: u64 },

    #[error("invalid tabulated data at line {line}: {msg}")]
    Table { line: usize, msg: String },

    #[error("invalid number `{0}`")]
    Number(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
