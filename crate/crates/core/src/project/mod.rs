//! Projection of annotations across a word alignment.
//!
//! Token tags go to every aligned target token. Spans map to the smallest
//! contiguous target range covering all tokens aligned to any of their
//! source tokens, then pass a length-ratio filter and overlap resolution.
//! Dependency trees are rebuilt over the target tokens, anchoring each one
//! to its highest aligned source node.

mod bio;
mod events;
mod spans;
mod tags;
mod tree;

pub use bio::{bio_to_spans, is_valid_bio, parse_tag, project_bio, repair_bio, spans_to_bio, BioTag};
pub use events::project_events;
pub use spans::{project_span, project_spans, SpanOutcome};
pub use tags::project_tags;
pub use tree::project_tree;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::align::Alignment;
use crate::error::{Error, Result};

/// Which tag a target token takes when several source tokens align to it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagChoice {
    /// Most frequent tag; ties go to the tag of the leftmost source token.
    #[default]
    MajorityThenLeftmost,
    /// Tag of the leftmost aligned source token.
    Leftmost,
}

impl FromStr for TagChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "majority-then-leftmost" => Ok(TagChoice::MajorityThenLeftmost),
            "leftmost" => Ok(TagChoice::Leftmost),
            other => Err(Error::InvalidArgument(format!("unknown tag choice {other:?}"))),
        }
    }
}

/// How overlapping projected spans are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionRule {
    /// Keep the span whose source span starts first.
    #[default]
    KeepEarliestSource,
    /// Keep the shortest target span, then the earliest source.
    KeepShortestTarget,
}

impl FromStr for CollisionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep-earliest-source" => Ok(CollisionRule::KeepEarliestSource),
            "keep-shortest-target" => Ok(CollisionRule::KeepShortestTarget),
            other => Err(Error::InvalidArgument(format!("unknown collision rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionPolicy {
    pub tag_choice: TagChoice,
    /// Tag for target tokens with no alignment in token projection.
    pub fill_tag: String,
    /// Projected spans longer than `ratio_limit` times their source span
    /// are dropped.
    pub ratio_limit: f64,
    /// `true`: drop iff target length > limit × source length.
    /// `false`: drop iff target length >= limit × source length.
    pub strict_ratio: bool,
    pub collision: CollisionRule,
    /// Relation for target tokens attached by rule rather than copied from
    /// the source tree.
    pub attach_deprel: String,
}

impl Default for ProjectionPolicy {
    fn default() -> Self {
        ProjectionPolicy {
            tag_choice: TagChoice::default(),
            fill_tag: "X".to_string(),
            ratio_limit: 5.0,
            strict_ratio: true,
            collision: CollisionRule::default(),
            attach_deprel: "dep".to_string(),
        }
    }
}

impl ProjectionPolicy {
    pub fn check(&self) -> Result<()> {
        if !(self.ratio_limit > 0.0 && self.ratio_limit.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ratio_limit must be positive, got {}",
                self.ratio_limit
            )));
        }
        if self.fill_tag.is_empty() || self.attach_deprel.is_empty() {
            return Err(Error::InvalidArgument(
                "fill_tag and attach_deprel must be non-empty".into(),
            ));
        }
        Ok(())
    }

    fn too_long(&self, target_len: usize, source_len: usize) -> bool {
        let limit = self.ratio_limit * source_len as f64;
        let target = target_len as f64;
        if self.strict_ratio {
            target > limit
        } else {
            target >= limit
        }
    }
}

/// Accounting for span-level projection. Every source span ends up in
/// exactly one of `projected` or the `dropped_*` counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub source_spans: usize,
    pub projected: usize,
    /// No source token of the span had an alignment link.
    pub dropped_unaligned: usize,
    pub dropped_ratio: usize,
    pub dropped_collision: usize,
    /// Event arguments dropped because their trigger was dropped.
    pub dropped_orphaned: usize,
    /// Target tokens with no alignment link.
    pub unaligned_tokens: usize,
    /// BIO tags rewritten by repair.
    pub repaired_tags: usize,
}

impl ProjectionReport {
    pub fn dropped(&self) -> usize {
        self.dropped_unaligned + self.dropped_ratio + self.dropped_collision + self.dropped_orphaned
    }

    pub fn merge(&mut self, other: &ProjectionReport) {
        self.source_spans += other.source_spans;
        self.projected += other.projected;
        self.dropped_unaligned += other.dropped_unaligned;
        self.dropped_ratio += other.dropped_ratio;
        self.dropped_collision += other.dropped_collision;
        self.dropped_orphaned += other.dropped_orphaned;
        self.unaligned_tokens += other.unaligned_tokens;
        self.repaired_tags += other.repaired_tags;
    }

    fn record(&mut self, outcome: &SpanOutcome) {
        self.source_spans += 1;
        match outcome {
            SpanOutcome::Projected(_) => self.projected += 1,
            SpanOutcome::Unaligned => self.dropped_unaligned += 1,
            SpanOutcome::TooLong(_) => self.dropped_ratio += 1,
            SpanOutcome::Collision(_) => self.dropped_collision += 1,
            SpanOutcome::Orphaned => self.dropped_orphaned += 1,
        }
    }
}

/// Verifies the alignment fits a `src_len × tgt_len` sentence pair.
fn check_alignment(alignment: &Alignment, src_len: usize, tgt_len: usize) -> Result<()> {
    if let Some((s, t)) = alignment.dims() {
        if (s, t) != (src_len, tgt_len) {
            return Err(Error::InvalidArgument(format!(
                "alignment is for a {s}x{t} pair but the sentences are {src_len}x{tgt_len}"
            )));
        }
    }
    if let Some(link) = alignment.links().find(|l| l.src >= src_len || l.tgt >= tgt_len) {
        return Err(Error::InvalidArgument(format!(
            "link {}-{} outside a {src_len}x{tgt_len} sentence pair",
            link.src, link.tgt
        )));
    }
    Ok(())
}

fn unaligned_targets(alignment: &Alignment, tgt_len: usize) -> usize {
    alignment
        .sources_by_target(tgt_len)
        .iter()
        .filter(|s| s.is_empty())
        .count()
}
