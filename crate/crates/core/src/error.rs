use std::io;

use thiserror::Error;

/// Errors produced by the embedding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges or vertices")]
    EmptyGraph,

    #[error("vertex id {id} out of range for graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("missing embedding for vertex `{0}`")]
    MissingEmbedding(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
