use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error in record {id:?} at byte {offset}: {message}")]
    Parse {
        id: Option<u64>,
        offset: u64,
        message: String,
    },

    #[error("invalid category token `{0}`: expected Name[digits]")]
    CategoryToken(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("power-law fit needs at least 5 distinct degrees, found {0}")]
    TooFewDegrees(usize),

    #[error("requested {requested} nodes but only {available} are reachable")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("need {requested} 1-degree nodes, graph has {available}")]
    NotEnoughOneDegree { requested: usize, available: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unknown feature variant `{0}`")]
    UnknownVariant(String),

    #[error("non-finite training loss at epoch {epoch}, batch {batch}; lower the learning rate")]
    Diverged { epoch: usize, batch: usize },

    #[error("sampled subgraph has no degree-1 query nodes; try a larger n or another seed")]
    NoQueries,

    #[error("missing artifact {path}: run `{stage}` first")]
    MissingArtifact { stage: String, path: PathBuf },

    #[error("stale artifact {path}: hash differs from the manifest (use --force to override)")]
    StaleArtifact { path: PathBuf },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::UnknownVariant(_) => 1,
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<bincode::Error> for Error {
    fn from(e: bincode::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
