use std::io;
use std::path::{Path, PathBuf};

use ontomap_core::align::TranslatorError;
use ontomap_core::{AlignError, CorpusError, MetricError, OntologyError, SmartIdError};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    SmartId(#[from] SmartIdError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Align(AlignError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("translator error [{}]: {}", .0.code, .0.message)]
    Translator(TranslatorError),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Self::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn parse(path: impl AsRef<Path>, line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.as_ref().to_path_buf(),
            line,
            message: message.into(),
        }
    }

    /// 1 for I/O, parse and usage errors, 2 for data invariant violations,
    /// 3 for translator or protocol failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Config(_) => 1,
            Self::Ontology(_) | Self::SmartId(_) | Self::Corpus(_) | Self::Align(_) | Self::Metric(_) => 2,
            Self::Translator(_) => 3,
        }
    }
}

impl From<AlignError> for Error {
    fn from(err: AlignError) -> Self {
        match err {
            AlignError::Translator(t) => Self::Translator(t),
            other => Self::Align(other),
        }
    }
}

impl From<TranslatorError> for Error {
    fn from(err: TranslatorError) -> Self {
        Self::Translator(err)
    }
}
