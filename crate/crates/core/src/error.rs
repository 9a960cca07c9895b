use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sentence {sentence}: {message}")]
    Validation { sentence: String, message: String },

    #[error("sentence {sentence}: missing {field}")]
    MissingAnnotation { sentence: String, field: &'static str },

    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn validation(sentence: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            sentence: sentence.into(),
            message: message.into(),
        }
    }

    pub(crate) fn missing(sentence: impl Into<String>, field: &'static str) -> Self {
        Error::MissingAnnotation {
            sentence: sentence.into(),
            field,
        }
    }

    pub(crate) fn count(what: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::CountMismatch {
            what: what.into(),
            expected,
            found,
        }
    }

    /// True for failures of the underlying reader or writer, as opposed to
    /// malformed or inconsistent data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
