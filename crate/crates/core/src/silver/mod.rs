//! Silver corpus assembly and gold/silver mixing.

mod mix;
mod stats;

pub use mix::{mix, DevPolicy, LangCorpus, MixMetadata, MixMode, MixSpec, MixedSet, SHUFFLE_RNG};
pub use stats::{corpus_stats, CorpusStats, StatsRow};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::Alignment;
use crate::corpus::{AnnotatedSentence, Bitext, SentencePair};
use crate::error::{Error, Result};
use crate::project::{
    project_bio, project_events, project_tags, project_tree, repair_bio, ProjectionPolicy, ProjectionReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Pos,
    Ner,
    Parse,
    Events,
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(Task::Pos),
            "ner" => Ok(Task::Ner),
            "parse" => Ok(Task::Parse),
            "events" => Ok(Task::Events),
            other => Err(Error::InvalidArgument(format!("unknown task {other:?}"))),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Pos => "pos",
            Task::Ner => "ner",
            Task::Parse => "parse",
            Task::Events => "events",
        })
    }
}

/// Where a sentence's labels came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelSource {
    Gold,
    Projection,
    SelfTraining,
}

impl fmt::Display for LabelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelSource::Gold => "gold",
            LabelSource::Projection => "projection",
            LabelSource::SelfTraining => "self-training",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub pair_id: String,
    pub source: LabelSource,
    /// Alignment links used; 0 for labels not obtained by projection.
    pub links: usize,
    #[serde(flatten)]
    pub report: ProjectionReport,
}

/// Labeled target-language sentences, one provenance record each.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SilverCorpus {
    pub lang: String,
    pub sentences: Vec<AnnotatedSentence>,
    pub provenance: Vec<Provenance>,
}

impl SilverCorpus {
    /// Wraps human-annotated sentences so they can be counted alongside
    /// silver data.
    pub fn gold(lang: impl Into<String>, sentences: Vec<AnnotatedSentence>) -> SilverCorpus {
        let provenance = sentences
            .iter()
            .map(|s| Provenance {
                pair_id: s.id.clone(),
                source: LabelSource::Gold,
                links: 0,
                report: ProjectionReport::default(),
            })
            .collect();
        SilverCorpus {
            lang: lang.into(),
            sentences,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Counters summed over all sentences.
    pub fn report(&self) -> ProjectionReport {
        let mut total = ProjectionReport::default();
        for p in &self.provenance {
            total.merge(&p.report);
        }
        total
    }

    /// Provenance as JSON lines.
    pub fn provenance_jsonl(&self) -> String {
        let mut out = String::new();
        for p in &self.provenance {
            out.push_str(&serde_json::to_string(p).expect("provenance serializes"));
            out.push('\n');
        }
        out
    }
}

/// Target side of `pair` with the source annotations for `task` projected
/// onto it. Alignment problems are reported against the pair id.
fn project_pair(
    pair: &SentencePair,
    alignment: &Alignment,
    task: Task,
    policy: &ProjectionPolicy,
) -> Result<(AnnotatedSentence, ProjectionReport)> {
    let source = &pair.source;
    let mut target = AnnotatedSentence::from_forms(&pair.id, &pair.target.forms());
    let n = target.len();
    let in_pair = |e: Error| match e {
        Error::InvalidArgument(message) => Error::validation(&pair.id, message),
        other => other,
    };
    let mut report = ProjectionReport::default();
    match task {
        Task::Pos => {
            target.set_upos(project_tags(&source.require_upos()?, n, alignment, policy).map_err(in_pair)?);
        }
        Task::Ner => {
            let (tags, r) = project_bio(source.require_bio()?, n, alignment, policy).map_err(in_pair)?;
            target.bio = Some(tags);
            report = r;
        }
        Task::Parse => {
            let tree = source.require_tree()?;
            if let Some(upos) = source.upos() {
                target.set_upos(project_tags(&upos, n, alignment, policy).map_err(in_pair)?);
            }
            target.set_tree(&project_tree(&tree, n, alignment, policy).map_err(in_pair)?);
        }
        Task::Events => {
            let events = source
                .events
                .as_ref()
                .ok_or_else(|| Error::missing(&source.id, "events"))?;
            let (projected, r) = project_events(events, source.len(), n, alignment, policy).map_err(in_pair)?;
            target.events = Some(projected);
            report = r;
        }
    }
    if matches!(task, Task::Pos | Task::Parse) {
        report.unaligned_tokens = alignment.sources_by_target(n).iter().filter(|s| s.is_empty()).count();
    }
    Ok((target, report))
}

/// Projects the source annotations of every pair onto its target side.
/// Every pair yields a sentence, even when all of its annotations drop.
pub fn assemble_projection(
    bitext: &Bitext,
    alignments: &[Alignment],
    task: Task,
    policy: &ProjectionPolicy,
    lang: &str,
) -> Result<SilverCorpus> {
    policy.check()?;
    if let Some(pair) = bitext.pairs.get(alignments.len()) {
        return Err(Error::validation(&pair.id, "no alignment for this pair"));
    }
    if alignments.len() != bitext.len() {
        return Err(Error::count("alignments", bitext.len(), alignments.len()));
    }
    let results: Vec<Result<(AnnotatedSentence, ProjectionReport)>> = bitext
        .pairs
        .par_iter()
        .zip(alignments.par_iter())
        .map(|(pair, alignment)| project_pair(pair, alignment, task, policy))
        .collect();

    let mut corpus = SilverCorpus {
        lang: lang.to_string(),
        ..SilverCorpus::default()
    };
    for ((result, pair), alignment) in results.into_iter().zip(&bitext.pairs).zip(alignments) {
        let (sentence, report) = result?;
        corpus.provenance.push(Provenance {
            pair_id: pair.id.clone(),
            source: LabelSource::Projection,
            links: alignment.len(),
            report,
        });
        corpus.sentences.push(sentence);
    }
    Ok(corpus)
}

/// Attaches externally predicted labels to the translations, one
/// prediction per translation in order. BIO predictions are repaired.
pub fn assemble_self_training(
    translations: &[AnnotatedSentence],
    predictions: &[AnnotatedSentence],
    task: Task,
    lang: &str,
) -> Result<SilverCorpus> {
    if predictions.len() != translations.len() {
        return Err(Error::count(
            "predicted sentences",
            translations.len(),
            predictions.len(),
        ));
    }
    let mut corpus = SilverCorpus {
        lang: lang.to_string(),
        ..SilverCorpus::default()
    };
    for (translation, prediction) in translations.iter().zip(predictions) {
        let id = &translation.id;
        if prediction.len() != translation.len() {
            return Err(Error::validation(
                id,
                format!(
                    "prediction has {} tokens, translation has {}",
                    prediction.len(),
                    translation.len()
                ),
            ));
        }
        let mut sentence = AnnotatedSentence::from_forms(id, &translation.forms());
        let mut report = ProjectionReport::default();
        match task {
            Task::Pos => sentence.set_upos(prediction.require_upos()?),
            Task::Ner => {
                let tags = prediction.require_bio()?;
                let repaired = repair_bio(tags).map_err(|e| Error::validation(id, e.to_string()))?;
                report.repaired_tags = repaired.iter().zip(tags).filter(|(a, b)| a != b).count();
                sentence.bio = Some(repaired);
            }
            Task::Parse => {
                let tree = prediction.require_tree()?;
                if let Some(upos) = prediction.upos() {
                    sentence.set_upos(upos);
                }
                sentence.set_tree(&tree);
            }
            Task::Events => {
                let events = prediction.events.clone().ok_or_else(|| Error::missing(id, "events"))?;
                events.check(sentence.len()).map_err(|e| Error::validation(id, e))?;
                sentence.events = Some(events);
            }
        }
        corpus.provenance.push(Provenance {
            pair_id: id.clone(),
            source: LabelSource::SelfTraining,
            links: 0,
            report,
        });
        corpus.sentences.push(sentence);
    }
    Ok(corpus)
}
