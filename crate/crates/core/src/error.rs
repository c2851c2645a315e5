use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop rejected: edge from `{0}` to itself")]
    LoopRejected(String),

    #[error("duplicate edge `{source_label}` -> `{target_label}` on layer `{layer}`")]
    DuplicateEdge {
        source_label: String,
        target_label: String,
        layer: String,
    },

    #[error("invalid weight {0}: weights must be finite and non-negative")]
    InvalidWeight(f64),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown layer `{0}`")]
    UnknownLayer(String),

    #[error("alpha {alpha} out of range: expected 1..={layers}")]
    AlphaOutOfRange { alpha: usize, layers: usize },

    #[error("degenerate network: centrality needs at least 2 nodes, found {0}")]
    DegenerateNetwork(usize),

    #[error("invalid label {0:?}: labels must be non-empty and free of tabs and newlines")]
    InvalidLabel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A model-level error raised while ingesting the given 1-based line.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid generator config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Strips any line-number wrapper.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }

    /// The 1-based input line this error was reported at, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Parse { line, .. } | Error::AtLine { line, .. } => Some(*line),
            _ => None,
        }
    }
}
