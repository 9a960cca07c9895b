//! Sentence-level data model and the readers/writers for every annotation
//! and parallel-text format the pipeline touches.
//!
//! All token indices are 0-based. CoNLL-U's 1-based `HEAD` column is
//! converted at the reader/writer boundary, with `0` mapped to [`Head::Root`].

mod bio;
mod bitext;
mod conllu;
mod events;
mod tree;

pub use bio::{read_bio, write_bio};
pub use bitext::{read_bitext, read_plain, Bitext, SentencePair};
pub use conllu::{read_conllu, write_conllu, write_conllu_partial};
pub use events::{read_events, write_events};
pub(crate) use tree::find_cycle;
pub use tree::{DepTree, TreeError};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Governor of a token in a dependency tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Head {
    Root,
    Token(usize),
}

impl Head {
    pub fn index(self) -> Option<usize> {
        match self {
            Head::Root => None,
            Head::Token(i) => Some(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub upos: Option<String>,
    pub head: Option<Head>,
    pub deprel: Option<String>,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>) -> Self {
        Token {
            index,
            form: form.into(),
            upos: None,
            head: None,
            deprel: None,
        }
    }
}

/// Inclusive token range `[start, end]` carrying a label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

impl Span {
    pub fn new(start: usize, end: usize, label: impl Into<String>) -> Self {
        Span {
            start,
            end,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn check(&self, sentence_len: usize) -> std::result::Result<(), String> {
        if self.start > self.end {
            return Err(format!("span [{}, {}] has start after end", self.start, self.end));
        }
        if self.end >= sentence_len {
            return Err(format!(
                "span [{}, {}] exceeds sentence length {}",
                self.start, self.end, sentence_len
            ));
        }
        Ok(())
    }
}

/// An event argument. The span's label holds the argument role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub span: Span,
    pub trigger: usize,
}

/// Two-level event tree: triggers hang off an implicit virtual root and
/// every argument hangs off exactly one trigger.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventStructure {
    pub triggers: Vec<Span>,
    pub arguments: Vec<Argument>,
}

impl EventStructure {
    pub fn check(&self, sentence_len: usize) -> std::result::Result<(), String> {
        for (i, trigger) in self.triggers.iter().enumerate() {
            trigger.check(sentence_len).map_err(|e| format!("trigger {i}: {e}"))?;
        }
        for (i, arg) in self.arguments.iter().enumerate() {
            if arg.trigger >= self.triggers.len() {
                return Err(format!(
                    "argument {i} references trigger {} but only {} triggers exist",
                    arg.trigger,
                    self.triggers.len()
                ));
            }
            arg.span.check(sentence_len).map_err(|e| format!("argument {i}: {e}"))?;
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.triggers.is_empty() && self.arguments.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub id: String,
    pub tokens: Vec<Token>,
    pub bio: Option<Vec<String>>,
    pub events: Option<EventStructure>,
}

impl AnnotatedSentence {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Self {
        AnnotatedSentence {
            id: id.into(),
            tokens,
            bio: None,
            events: None,
        }
    }

    pub fn from_forms<S: AsRef<str>>(id: impl Into<String>, forms: &[S]) -> Self {
        let tokens = forms
            .iter()
            .enumerate()
            .map(|(i, f)| Token::new(i, f.as_ref()))
            .collect();
        Self::new(id, tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    /// UPOS tags, if every token carries one.
    pub fn upos(&self) -> Option<Vec<String>> {
        self.tokens.iter().map(|t| t.upos.clone()).collect()
    }

    pub fn require_upos(&self) -> Result<Vec<String>> {
        self.upos().ok_or_else(|| Error::missing(&self.id, "upos"))
    }

    pub fn set_upos(&mut self, tags: Vec<String>) {
        for (token, tag) in self.tokens.iter_mut().zip(tags) {
            token.upos = Some(tag);
        }
    }

    /// The dependency tree, if every token carries a head and a deprel.
    pub fn tree(&self) -> Option<Result<DepTree>> {
        let heads: Option<Vec<Head>> = self.tokens.iter().map(|t| t.head).collect();
        let deprels: Option<Vec<String>> = self.tokens.iter().map(|t| t.deprel.clone()).collect();
        match (heads, deprels) {
            (Some(h), Some(d)) => Some(DepTree::new(h, d).map_err(|e| Error::validation(&self.id, e.to_string()))),
            _ => None,
        }
    }

    pub fn require_tree(&self) -> Result<DepTree> {
        if self.tokens.iter().any(|t| t.head.is_none()) {
            return Err(Error::missing(&self.id, "head"));
        }
        self.tree().unwrap_or_else(|| Err(Error::missing(&self.id, "deprel")))
    }

    pub fn set_tree(&mut self, tree: &DepTree) {
        for (token, (head, deprel)) in self.tokens.iter_mut().zip(tree.heads().iter().zip(tree.deprels())) {
            token.head = Some(*head);
            token.deprel = Some(deprel.clone());
        }
    }

    pub fn require_bio(&self) -> Result<&[String]> {
        let bio = self.bio.as_deref().ok_or_else(|| Error::missing(&self.id, "bio"))?;
        if bio.len() != self.len() {
            return Err(Error::validation(
                &self.id,
                format!("{} BIO tags for {} tokens", bio.len(), self.len()),
            ));
        }
        Ok(bio)
    }

    /// Checks every type invariant: token indices, head ranges, tree shape,
    /// BIO length and event spans.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for (i, token) in self.tokens.iter().enumerate() {
            if token.index != i {
                return Err(Error::validation(
                    &self.id,
                    format!("token at position {i} has index {}", token.index),
                ));
            }
        }
        let with_head = self.tokens.iter().filter(|t| t.head.is_some()).count();
        if with_head != 0 && with_head != n {
            return Err(Error::validation(&self.id, "heads present on only some tokens"));
        }
        if with_head == n && n > 0 {
            let heads: Vec<Head> = self.tokens.iter().filter_map(|t| t.head).collect();
            tree::check_heads(&heads).map_err(|e| Error::validation(&self.id, e.to_string()))?;
        }
        if let Some(bio) = &self.bio {
            if bio.len() != n {
                return Err(Error::validation(
                    &self.id,
                    format!("{} BIO tags for {} tokens", bio.len(), n),
                ));
            }
        }
        if let Some(events) = &self.events {
            events.check(n).map_err(|e| Error::validation(&self.id, e))?;
        }
        Ok(())
    }
}
