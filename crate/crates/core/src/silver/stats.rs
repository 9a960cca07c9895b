use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LabelSource, SilverCorpus};
use crate::project::{bio_to_spans, repair_bio};

/// Counts for one language and label source.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub lang: String,
    /// `None` on the totals row.
    pub source: Option<LabelSource>,
    pub sentences: usize,
    pub tokens: usize,
    pub tagged_tokens: usize,
    pub entities: usize,
    pub trees: usize,
    pub triggers: usize,
    pub arguments: usize,
}

impl StatsRow {
    fn add(&mut self, other: &StatsRow) {
        self.sentences += other.sentences;
        self.tokens += other.tokens;
        self.tagged_tokens += other.tagged_tokens;
        self.entities += other.entities;
        self.trees += other.trees;
        self.triggers += other.triggers;
        self.arguments += other.arguments;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "lang\tsource\tsentences\ttokens\ttagged\tentities\ttrees\ttriggers\targuments"
        )?;
        for r in self.rows.iter().chain(std::iter::once(&self.total)) {
            let source = r.source.map_or_else(|| "all".to_string(), |s| s.to_string());
            writeln!(
                f,
                "{}\t{source}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.lang, r.sentences, r.tokens, r.tagged_tokens, r.entities, r.trees, r.triggers, r.arguments
            )?;
        }
        Ok(())
    }
}

/// Sentence, token and annotation counts per (language, label source).
/// Malformed BIO is counted after repair; unreadable tags count no entities.
pub fn corpus_stats(corpora: &[&SilverCorpus]) -> CorpusStats {
    let mut groups: BTreeMap<(String, LabelSource), StatsRow> = BTreeMap::new();
    for corpus in corpora {
        for (sentence, prov) in corpus.sentences.iter().zip(&corpus.provenance) {
            let row = groups
                .entry((corpus.lang.clone(), prov.source))
                .or_insert_with(|| StatsRow {
                    lang: corpus.lang.clone(),
                    source: Some(prov.source),
                    ..StatsRow::default()
                });
            row.sentences += 1;
            row.tokens += sentence.len();
            row.tagged_tokens += sentence.tokens.iter().filter(|t| t.upos.is_some()).count();
            if let Some(bio) = &sentence.bio {
                row.entities += repair_bio(bio).and_then(|t| bio_to_spans(&t)).map_or(0, |s| s.len());
            }
            if !sentence.is_empty() && sentence.tokens.iter().all(|t| t.head.is_some()) {
                row.trees += 1;
            }
            if let Some(events) = &sentence.events {
                row.triggers += events.triggers.len();
                row.arguments += events.arguments.len();
            }
        }
    }
    let mut total = StatsRow {
        lang: "all".to_string(),
        ..StatsRow::default()
    };
    for row in groups.values() {
        total.add(row);
    }
    CorpusStats {
        rows: groups.into_values().collect(),
        total,
    }
}
