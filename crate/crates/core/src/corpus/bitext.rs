use std::collections::HashSet;
use std::io::BufRead;

use super::AnnotatedSentence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: String,
    pub source: AnnotatedSentence,
    pub target: AnnotatedSentence,
}

/// Parallel sentences, source and target zipped in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bitext {
    pub pairs: Vec<SentencePair>,
    /// Number of pairs with an empty source or target line.
    pub empty_lines: usize,
}

impl Bitext {
    /// Zips already-parsed sentences. Pair ids are 1-based positions and
    /// become the target sentence ids; source ids are left as read.
    pub fn zip(sources: Vec<AnnotatedSentence>, targets: Vec<AnnotatedSentence>) -> Result<Self> {
        if sources.len() != targets.len() {
            return Err(Error::count("target sentences", sources.len(), targets.len()));
        }
        let mut empty_lines = 0;
        let pairs = sources
            .into_iter()
            .zip(targets)
            .enumerate()
            .map(|(i, (source, mut target))| {
                let id = (i + 1).to_string();
                if source.is_empty() || target.is_empty() {
                    empty_lines += 1;
                }
                target.id = id.clone();
                SentencePair { id, source, target }
            })
            .collect();
        Ok(Bitext { pairs, empty_lines })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same pairs with source and target exchanged.
    pub fn reversed(&self) -> Bitext {
        Bitext {
            pairs: self
                .pairs
                .iter()
                .map(|p| SentencePair {
                    id: p.id.clone(),
                    source: p.target.clone(),
                    target: p.source.clone(),
                })
                .collect(),
            empty_lines: self.empty_lines,
        }
    }

    pub fn check_ids(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for pair in &self.pairs {
            if !seen.insert(pair.id.as_str()) {
                return Err(Error::validation(&pair.id, "duplicate pair id"));
            }
        }
        Ok(())
    }
}

/// Reads whitespace-tokenized parallel text, one sentence per line.
/// Empty lines become zero-token sentences and are counted in
/// [`Bitext::empty_lines`].
pub fn read_bitext<S: BufRead, T: BufRead>(source: S, target: T) -> Result<Bitext> {
    let sources = read_plain(source)?;
    let targets = read_plain(target)?;
    if sources.len() != targets.len() {
        return Err(Error::count(
            "bitext lines (source vs target)",
            sources.len(),
            targets.len(),
        ));
    }
    Bitext::zip(sources, targets)
}

/// One whitespace-tokenized sentence per line; ids are 1-based line numbers.
pub fn read_plain<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line?;
            let forms: Vec<&str> = line.split_whitespace().collect();
            Ok(AnnotatedSentence::from_forms((i + 1).to_string(), &forms))
        })
        .collect()
}
