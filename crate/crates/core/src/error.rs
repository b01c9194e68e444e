use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} outside the representable fixed-point range ±{bound}")]
    Range { value: f64, bound: f64 },
    #[error("top-k with k={k} over {n} scores")]
    TopK { k: usize, n: usize },
    #[error("replicated share components disagree: {0}")]
    Consistency(String),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("protocol desync: {0}")]
    Desync(String),
    #[error("timed out waiting for {0}")]
    Timeout(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("embedding row {0} has zero norm")]
    ZeroRow(usize),
    #[error("duplicate vocabulary word {0:?}")]
    DuplicateWord(String),
    #[error("text is empty after tokenization")]
    EmptyText,
    #[error("inserter failed: {0}")]
    Inserter(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Transport(_) | Error::Timeout(_) => 3,
            _ => 2,
        }
    }
}
