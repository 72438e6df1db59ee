use std::path::PathBuf;

use thiserror::Error;

/// Unified error type for the toolkit.
///
/// Variants are grouped by how a frontend should treat them: bad inputs or
/// arguments (`InvalidInput`), unreadable or malformed files (`Io`, `Data`,
/// `TreeParse`, `ModelFile`), and numeric failures (`NonFinite`, `Diverged`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed content in a data file, located by line number (1-based).
    #[error("{path}:{line}: {msg}")]
    Data {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// Constituency tree syntax error, located by byte offset into the line.
    #[error("tree parse error at offset {offset}: {msg}")]
    TreeParse { offset: usize, msg: String },

    /// Bad argument or precondition violation (empty dataset, dimension
    /// mismatch, unknown label, class too small for k folds, ...).
    #[error("{0}")]
    InvalidInput(String),

    /// A model file failed version or shape validation.
    #[error("{path}: {msg}")]
    ModelFile { path: PathBuf, msg: String },

    /// A gradient or parameter block stopped being finite.
    #[error("non-finite {what} in {block}")]
    NonFinite { what: &'static str, block: String },

    /// Training loss became non-finite.
    #[error("training diverged at epoch {epoch}, batch {batch}: {msg}")]
    Diverged {
        epoch: usize,
        batch: usize,
        msg: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn data(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Data {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn model_file(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::ModelFile {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
