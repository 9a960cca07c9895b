//! Task metrics over predicted and gold corpora.
//!
//! All scores are micro-averaged: counts are pooled over the corpus and
//! divided once. Every score keeps the counts it was computed from.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::align::AlignScore;
use crate::corpus::{AnnotatedSentence, Span};
use crate::error::{Error, Result};
use crate::project::{bio_to_spans, repair_bio};

/// UPOS tags left out of attachment scores.
pub const UNSCORED_UPOS: [&str; 2] = ["PUNCT", "SYM"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub name: String,
    pub numerator: u64,
    pub denominator: u64,
    /// Fraction in [0, 1].
    pub value: f64,
}

impl Score {
    /// `numerator / denominator`, or 1 when there is nothing to count.
    pub fn ratio(name: &str, numerator: u64, denominator: u64) -> Score {
        let value = if denominator == 0 {
            1.0
        } else {
            numerator as f64 / denominator as f64
        };
        Score {
            name: name.to_string(),
            numerator,
            denominator,
            value,
        }
    }

    pub fn percent(&self) -> f64 {
        100.0 * self.value
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{:.1}\t{}/{}",
            self.name,
            self.percent(),
            self.numerator,
            self.denominator
        )
    }
}

/// Entity counts for one label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub label: String,
    pub predicted: u64,
    pub gold: u64,
    pub correct: u64,
}

impl LabelCounts {
    pub fn precision(&self) -> Score {
        Score::ratio("precision", self.correct, self.predicted)
    }

    pub fn recall(&self) -> Score {
        Score::ratio("recall", self.correct, self.gold)
    }

    pub fn f1(&self) -> Score {
        Score::ratio("f1", 2 * self.correct, self.predicted + self.gold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub task: String,
    pub scores: Vec<Score>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_label: Vec<LabelCounts>,
}

impl MetricReport {
    pub fn get(&self, name: &str) -> Option<&Score> {
        self.scores.iter().find(|s| s.name == name)
    }

    /// Value of a named score; panics if the report has no such score.
    pub fn value(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("{} report has no {name} score", self.task))
            .value
    }

    /// Column names matching [`to_tsv`](Self::to_tsv).
    pub fn tsv_header(&self) -> String {
        std::iter::once("task")
            .chain(self.scores.iter().map(|s| s.name.as_str()))
            .collect::<Vec<_>>()
            .join("\t")
    }

    /// One line: the task followed by every score as a percentage.
    pub fn to_tsv(&self) -> String {
        let mut line = self.task.clone();
        for s in &self.scores {
            line.push_str(&format!("\t{:.1}", s.percent()));
        }
        line
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<MetricReport> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("metric report: {e}")))
    }

    /// Alignment scores with their link counts. Values come from `score`
    /// as given, so a macro-averaged score keeps its averaged values next
    /// to the pooled counts.
    pub fn alignment(score: &AlignScore) -> MetricReport {
        let c = score.counts;
        let with = |name: &str, numerator: u64, denominator: u64, value: f64| Score {
            name: name.to_string(),
            numerator,
            denominator,
            value,
        };
        MetricReport {
            task: "align".to_string(),
            scores: vec![
                with(
                    "aer",
                    c.hypothesis + c.sure - c.hit_sure - c.hit_possible,
                    c.hypothesis + c.sure,
                    score.aer,
                ),
                with("precision", c.hit_possible, c.hypothesis, score.precision),
                with("recall", c.hit_sure, c.sure, score.recall),
                with(
                    "f",
                    2 * c.hit_sure * c.hit_possible,
                    c.hit_possible * c.sure + c.hit_sure * c.hypothesis,
                    score.f,
                ),
            ],
            per_label: Vec::new(),
        }
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "task\t{}", self.task)?;
        for s in &self.scores {
            writeln!(f, "{s}")?;
        }
        for l in &self.per_label {
            writeln!(
                f,
                "label\t{}\tp {:.1}\tr {:.1}\tf1 {:.1}",
                l.label,
                l.precision().percent(),
                l.recall().percent(),
                l.f1().percent()
            )?;
        }
        Ok(())
    }
}

fn check_lengths(predicted: &[AnnotatedSentence], gold: &[AnnotatedSentence]) -> Result<()> {
    if predicted.len() != gold.len() {
        return Err(Error::count("predicted sentences", gold.len(), predicted.len()));
    }
    for (p, g) in predicted.iter().zip(gold) {
        if p.len() != g.len() {
            return Err(Error::validation(
                &g.id,
                format!("{} predicted tokens for {} gold tokens", p.len(), g.len()),
            ));
        }
    }
    Ok(())
}

fn entities(sentence: &AnnotatedSentence) -> Result<Vec<Span>> {
    bio_to_spans(&repair_bio(sentence.require_bio()?)?)
}

/// Exact-match entity precision, recall and F1. Invalid BIO on either
/// side is repaired before decoding.
pub fn entity_f1(predicted: &[AnnotatedSentence], gold: &[AnnotatedSentence]) -> Result<MetricReport> {
    check_lengths(predicted, gold)?;
    let mut total = LabelCounts::default();
    let mut per_label: BTreeMap<String, LabelCounts> = BTreeMap::new();
    for (p, g) in predicted.iter().zip(gold) {
        let pred = entities(p)?;
        let gold_spans = entities(g)?;
        let gold_set: HashSet<&Span> = gold_spans.iter().collect();
        for span in &pred {
            let counts = per_label.entry(span.label.clone()).or_default();
            counts.predicted += 1;
            total.predicted += 1;
            if gold_set.contains(span) {
                counts.correct += 1;
                total.correct += 1;
            }
        }
        for span in &gold_spans {
            per_label.entry(span.label.clone()).or_default().gold += 1;
            total.gold += 1;
        }
    }
    Ok(MetricReport {
        task: "ner".to_string(),
        scores: vec![total.precision(), total.recall(), total.f1()],
        per_label: per_label
            .into_iter()
            .map(|(label, counts)| LabelCounts { label, ..counts })
            .collect(),
    })
}

/// Token-level UPOS accuracy over the whole corpus.
pub fn pos_accuracy(predicted: &[AnnotatedSentence], gold: &[AnnotatedSentence]) -> Result<MetricReport> {
    check_lengths(predicted, gold)?;
    let (mut correct, mut total) = (0u64, 0u64);
    for (p, g) in predicted.iter().zip(gold) {
        let pt = p.require_upos()?;
        let gt = g.require_upos()?;
        correct += pt.iter().zip(&gt).filter(|(a, b)| a == b).count() as u64;
        total += gt.len() as u64;
    }
    if total == 0 {
        return Err(Error::InvalidArgument("no tokens to score".into()));
    }
    Ok(MetricReport {
        task: "pos".to_string(),
        scores: vec![Score::ratio("accuracy", correct, total)],
        per_label: Vec::new(),
    })
}

/// Labeled and unlabeled attachment scores. Tokens whose gold UPOS is in
/// [`UNSCORED_UPOS`] are skipped; relations must match exactly, subtypes
/// included.
pub fn las_uas(predicted: &[AnnotatedSentence], gold: &[AnnotatedSentence]) -> Result<MetricReport> {
    check_lengths(predicted, gold)?;
    let (mut labeled, mut unlabeled, mut total) = (0u64, 0u64, 0u64);
    for (p, g) in predicted.iter().zip(gold) {
        let upos = g.require_upos()?;
        for ((pt, gt), tag) in p.tokens.iter().zip(&g.tokens).zip(&upos) {
            let ph = pt.head.ok_or_else(|| Error::missing(&p.id, "head"))?;
            let pd = pt.deprel.as_deref().ok_or_else(|| Error::missing(&p.id, "deprel"))?;
            let gh = gt.head.ok_or_else(|| Error::missing(&g.id, "head"))?;
            let gd = gt.deprel.as_deref().ok_or_else(|| Error::missing(&g.id, "deprel"))?;
            if UNSCORED_UPOS.contains(&tag.as_str()) {
                continue;
            }
            total += 1;
            if ph == gh {
                unlabeled += 1;
                if pd == gd {
                    labeled += 1;
                }
            }
        }
    }
    if total == 0 {
        return Err(Error::InvalidArgument("no scorable tokens".into()));
    }
    Ok(MetricReport {
        task: "parse".to_string(),
        scores: vec![
            Score::ratio("las", labeled, total),
            Score::ratio("uas", unlabeled, total),
        ],
        per_label: Vec::new(),
    })
}
