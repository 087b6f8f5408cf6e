use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed dataset line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("bad checkpoint: {0}")]
    Checkpoint(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("training diverged (seed {seed}, epoch {epoch}, batch {batch}): {message}")]
    Diverged {
        seed: u64,
        epoch: usize,
        batch: usize,
        message: String,
    },

    #[error("score set must contain both labels")]
    SingleClass,

    #[error("train/test split shares archetype seed {0} (leakage)")]
    SplitLeakage(u64),

    #[error("missing artifact: {path} ({hint})")]
    MissingArtifact { path: String, hint: String },

    #[error("manifest hash mismatch for {path}: expected {expected}, found {found}")]
    ManifestMismatch {
        path: String,
        expected: String,
        found: String,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
