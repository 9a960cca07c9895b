//! Word alignments: the link container, Pharaoh text I/O, a built-in
//! IBM Model 1 aligner, symmetrization heuristics and AER scoring.

mod model1;
mod score;
mod symmetrize;

pub use model1::{viterbi_align, BidirectionalModel, LexiconModel, TrainConfig};
pub use score::{f_measure, score_alignment, score_corpus, score_gold, AlignCounts, AlignScore, Averaging};
pub use symmetrize::{symmetrize, Heuristic};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strength {
    Sure,
    Possible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlignmentLink {
    pub src: usize,
    pub tgt: usize,
    pub strength: Strength,
}

/// Unordered `(source, target)` index pairs.
pub type LinkSet = BTreeSet<(usize, usize)>;

/// Links for one sentence pair. A `(src, tgt)` pair occurs at most once;
/// inserting it again keeps the stronger of the two strengths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    links: BTreeMap<(usize, usize), Strength>,
    dims: Option<(usize, usize)>,
}

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty alignment for a pair of known lengths.
    pub fn with_dims(src_len: usize, tgt_len: usize) -> Self {
        Alignment {
            links: BTreeMap::new(),
            dims: Some((src_len, tgt_len)),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        let mut a = Alignment::new();
        for (s, t) in pairs {
            a.insert(s, t, Strength::Sure);
        }
        a
    }

    /// One-to-one diagonal alignment over `n` tokens.
    pub fn identity(n: usize) -> Self {
        let mut a = Self::from_pairs((0..n).map(|i| (i, i)));
        a.dims = Some((n, n));
        a
    }

    pub fn insert(&mut self, src: usize, tgt: usize, strength: Strength) {
        let entry = self.links.entry((src, tgt)).or_insert(strength);
        if strength == Strength::Sure {
            *entry = Strength::Sure;
        }
    }

    pub fn contains(&self, src: usize, tgt: usize) -> bool {
        self.links.contains_key(&(src, tgt))
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Sentence lengths `(source, target)`, once known.
    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    /// Links in `(src, tgt)` order.
    pub fn links(&self) -> impl Iterator<Item = AlignmentLink> + '_ {
        self.links
            .iter()
            .map(|(&(src, tgt), &strength)| AlignmentLink { src, tgt, strength })
    }

    pub fn pairs(&self) -> LinkSet {
        self.links.keys().copied().collect()
    }

    pub fn sure(&self) -> LinkSet {
        self.links
            .iter()
            .filter(|(_, s)| **s == Strength::Sure)
            .map(|(k, _)| *k)
            .collect()
    }

    /// Sure and possible links together, so that `sure() ⊆ possible()`.
    pub fn possible(&self) -> LinkSet {
        self.pairs()
    }

    /// Swaps the roles of source and target.
    pub fn transpose(&self) -> Alignment {
        Alignment {
            links: self.links.iter().map(|(&(s, t), &k)| ((t, s), k)).collect(),
            dims: self.dims.map(|(s, t)| (t, s)),
        }
    }

    /// Checks every link against the sentence lengths and records them.
    pub fn bind(mut self, src_len: usize, tgt_len: usize) -> std::result::Result<Self, String> {
        if let Some((&(s, t), _)) = self.links.iter().find(|(&(s, t), _)| s >= src_len || t >= tgt_len) {
            return Err(format!("link {s}-{t} outside a {src_len}x{tgt_len} sentence pair"));
        }
        self.dims = Some((src_len, tgt_len));
        Ok(self)
    }

    /// Target positions aligned to each source position.
    pub fn targets_by_source(&self, src_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); src_len];
        for &(s, t) in self.links.keys() {
            if s < src_len {
                out[s].push(t);
            }
        }
        out
    }

    /// Source positions aligned to each target position, ascending.
    pub fn sources_by_target(&self, tgt_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); tgt_len];
        for &(s, t) in self.links.keys() {
            if t < tgt_len {
                out[t].push(s);
            }
        }
        out
    }
}

/// Parses one Pharaoh line: space-separated `i-j` or `i?j` links with
/// 0-based indices. `i?j` is always possible; `i-j` takes `dash_strength`,
/// which is [`Strength::Sure`] for ordinary alignment files.
pub fn parse_pharaoh(line: &str, dash_strength: Strength) -> Result<Alignment> {
    parse_line(1, line, dash_strength)
}

fn parse_line(lineno: usize, line: &str, dash_strength: Strength) -> Result<Alignment> {
    let mut alignment = Alignment::new();
    for item in line.split_whitespace() {
        let (pair, strength) = match item.split_once('?') {
            Some(pair) => (pair, Strength::Possible),
            None => match item.split_once('-') {
                Some(pair) => (pair, dash_strength),
                None => return Err(Error::parse(lineno, format!("link {item:?} has no separator"))),
            },
        };
        let index = |s: &str| {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(lineno, format!("invalid index in link {item:?}")));
            }
            s.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("invalid index in link {item:?}")))
        };
        alignment.insert(index(pair.0)?, index(pair.1)?, strength);
    }
    Ok(alignment)
}

/// Reads a Pharaoh file, one alignment per line.
pub fn read_pharaoh<R: BufRead>(reader: R, dash_strength: Strength) -> Result<Vec<Alignment>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| parse_line(i + 1, &line?, dash_strength))
        .collect()
}

/// Formats links sorted by `(src, tgt)`; sure links as `i-j`, possible
/// links as `i?j`.
pub fn emit_pharaoh(alignment: &Alignment) -> String {
    let mut out = String::new();
    for link in alignment.links() {
        if !out.is_empty() {
            out.push(' ');
        }
        let sep = match link.strength {
            Strength::Sure => '-',
            Strength::Possible => '?',
        };
        write!(out, "{}{}{}", link.src, sep, link.tgt).expect("writing to a String");
    }
    out
}
