use thiserror::Error;

/// Errors surfaced by dataset ingestion, graph mutation, search and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid neighbor list for vertex {vertex}: {reason}")]
    InvalidNeighbors { vertex: usize, reason: String },

    #[error("search requires k <= L, got k={k}, L={l}")]
    KExceedsL { k: usize, l: usize },

    #[error("query dimension {query} does not match dataset dimension {dataset}")]
    DimensionMismatch { query: usize, dataset: usize },

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
