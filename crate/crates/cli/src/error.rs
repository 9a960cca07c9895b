use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: xlproj::Error },

    #[error(transparent)]
    Core(#[from] xlproj::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn data(path: &Path, source: xlproj::Error) -> Self {
        if let xlproj::Error::Io(e) = source {
            return CliError::io(path, e);
        }
        CliError::Data {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(e) | CliError::Data { source: e, .. } if e.is_io() => 2,
            _ => 1,
        }
    }
}
