use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Alignment, LinkSet};
use crate::error::{Error, Result};

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Link counts behind an alignment score. Counts from several sentence
/// pairs add up to a pooled (micro-averaged) corpus score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignCounts {
    /// |A|
    pub hypothesis: u64,
    /// |S|
    pub sure: u64,
    /// |A ∩ S|
    pub hit_sure: u64,
    /// |A ∩ P|
    pub hit_possible: u64,
}

impl AlignCounts {
    pub fn add(&mut self, other: &AlignCounts) {
        self.hypothesis += other.hypothesis;
        self.sure += other.sure;
        self.hit_sure += other.hit_sure;
        self.hit_possible += other.hit_possible;
    }

    /// `|A ∩ P| / |A|`, or 1 for an empty hypothesis.
    pub fn precision(&self) -> f64 {
        ratio(self.hit_possible, self.hypothesis)
    }

    /// `|A ∩ S| / |S|`, or 1 for an empty sure set.
    pub fn recall(&self) -> f64 {
        ratio(self.hit_sure, self.sure)
    }

    /// `1 - (|A ∩ S| + |A ∩ P|) / (|A| + |S|)`, or 0 when both sets are empty.
    pub fn aer(&self) -> f64 {
        1.0 - ratio(self.hit_sure + self.hit_possible, self.hypothesis + self.sure)
    }

    /// F-measure of [`precision`](Self::precision) and
    /// [`recall`](Self::recall), computed as a single quotient of link
    /// counts so that `aer == 1 - f` holds exactly when S = P.
    pub fn f(&self) -> f64 {
        if self.hypothesis == 0 || self.sure == 0 {
            return f_measure(self.precision(), self.recall());
        }
        let (a, b) = (self.hit_sure as u128, self.hit_possible as u128);
        let num = 2 * a * b;
        let den = b * self.sure as u128 + a * self.hypothesis as u128;
        if num == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    }

    pub fn score(&self) -> AlignScore {
        AlignScore {
            aer: self.aer(),
            precision: self.precision(),
            recall: self.recall(),
            f: self.f(),
            counts: *self,
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignScore {
    pub aer: f64,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub counts: AlignCounts,
}

/// Scores a hypothesis against gold sure and possible link sets.
/// Fails unless `sure ⊆ possible`.
pub fn score_alignment(hypothesis: &Alignment, sure: &LinkSet, possible: &LinkSet) -> Result<AlignCounts> {
    if let Some((s, t)) = sure.difference(possible).next() {
        return Err(Error::InvalidArgument(format!(
            "sure link {s}-{t} is missing from the possible set"
        )));
    }
    let hyp = hypothesis.pairs();
    Ok(AlignCounts {
        hypothesis: hyp.len() as u64,
        sure: sure.len() as u64,
        hit_sure: hyp.intersection(sure).count() as u64,
        hit_possible: hyp.intersection(possible).count() as u64,
    })
}

/// Scores against a gold alignment whose sure links form S and whose
/// sure and possible links together form P.
pub fn score_gold(hypothesis: &Alignment, gold: &Alignment) -> AlignCounts {
    score_alignment(hypothesis, &gold.sure(), &gold.possible()).expect("sure links are a subset of all links")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Pool counts over all pairs, then divide.
    #[default]
    Micro,
    /// Average per-pair scores.
    Macro,
}

impl FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "micro" => Ok(Averaging::Micro),
            "macro" => Ok(Averaging::Macro),
            other => Err(Error::InvalidArgument(format!("unknown averaging {other:?}"))),
        }
    }
}

/// Corpus-level score over aligned lists of hypotheses and gold alignments.
/// The returned counts are always the pooled totals.
pub fn score_corpus(hypotheses: &[Alignment], gold: &[Alignment], averaging: Averaging) -> Result<AlignScore> {
    if hypotheses.len() != gold.len() {
        return Err(Error::count("hypothesis alignments", gold.len(), hypotheses.len()));
    }
    let per_pair: Vec<AlignCounts> = hypotheses.iter().zip(gold).map(|(h, g)| score_gold(h, g)).collect();
    let mut total = AlignCounts::default();
    for c in &per_pair {
        total.add(c);
    }
    match averaging {
        Averaging::Micro => Ok(total.score()),
        Averaging::Macro => {
            if per_pair.is_empty() {
                return Ok(total.score());
            }
            let n = per_pair.len() as f64;
            let mean = |f: fn(&AlignCounts) -> f64| per_pair.iter().map(f).sum::<f64>() / n;
            Ok(AlignScore {
                aer: mean(AlignCounts::aer),
                precision: mean(AlignCounts::precision),
                recall: mean(AlignCounts::recall),
                f: mean(AlignCounts::f),
                counts: total,
            })
        }
    }
}
