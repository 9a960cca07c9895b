use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;
use xlproj::corpus::{
    read_bio, read_conllu, read_events, write_bio, write_conllu_partial, write_events, AnnotatedSentence,
};
use xlproj::silver::Task;

use crate::error::CliError;

pub fn read_with<T>(path: &Path, parse: impl FnOnce(BufReader<File>) -> xlproj::Result<T>) -> Result<T, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse(BufReader::new(file)).map_err(|e| CliError::data(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Fails with an I/O error naming the first input that is not a file.
pub fn require_inputs<'a>(paths: impl IntoIterator<Item = &'a Path>) -> Result<(), CliError> {
    for path in paths {
        if !path.is_file() {
            return Err(CliError::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
            ));
        }
    }
    Ok(())
}

/// Corpus reader for a task's annotation format.
pub fn read_corpus(task: Task, path: &Path) -> Result<Vec<AnnotatedSentence>, CliError> {
    match task {
        Task::Pos | Task::Parse => read_with(path, read_conllu),
        Task::Ner => read_with(path, read_bio),
        Task::Events => read_with(path, read_events),
    }
}

pub fn render_corpus(task: Task, sentences: &[AnnotatedSentence]) -> xlproj::Result<Vec<u8>> {
    let mut out = Vec::new();
    match task {
        Task::Pos | Task::Parse => write_conllu_partial(&mut out, sentences)?,
        Task::Ner => write_bio(&mut out, sentences)?,
        Task::Events => write_events(&mut out, sentences)?,
    }
    Ok(out)
}

pub fn corpus_extension(task: Task) -> &'static str {
    match task {
        Task::Pos | Task::Parse => "conllu",
        Task::Ner => "bio",
        Task::Events => "jsonl",
    }
}

/// Output files collected in memory and written together at the end, so
/// a failing command leaves no partial outputs behind.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((path.into(), contents.into()));
    }

    /// Writes every file to a temporary sibling, then renames them all
    /// into place.
    pub fn commit(self) -> Result<(), CliError> {
        let mut staged: Vec<(NamedTempFile, PathBuf)> = Vec::with_capacity(self.files.len());
        for (path, contents) in self.files {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            let mut tmp = NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
            tmp.write_all(&contents).map_err(|e| CliError::io(&path, e))?;
            tmp.as_file().sync_all().map_err(|e| CliError::io(&path, e))?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
            tracing::debug!(path = %path.display(), "wrote");
        }
        Ok(())
    }
}
