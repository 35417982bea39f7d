use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Encoding { path: PathBuf, offset: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no links")]
    NoLinks,

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("empty graph")]
    EmptyGraph,

    #[error("unknown node {0}")]
    UnknownNode(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
