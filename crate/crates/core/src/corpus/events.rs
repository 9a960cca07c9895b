use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{AnnotatedSentence, Argument, EventStructure, Span};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventRecord {
    id: String,
    tokens: Vec<String>,
    #[serde(default)]
    triggers: Vec<TriggerRecord>,
    #[serde(default)]
    arguments: Vec<ArgumentRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriggerRecord {
    start: usize,
    end: usize,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArgumentRecord {
    start: usize,
    end: usize,
    role: String,
    trigger: usize,
}

/// Reads JSON Lines event records, one sentence per line:
///
/// ```text
/// {"id":"d1","tokens":["Rebels","attacked","Kabul"],
///  "triggers":[{"start":1,"end":1,"label":"Attack"}],
///  "arguments":[{"start":0,"end":0,"role":"Attacker","trigger":0}]}
/// ```
pub fn read_events<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EventRecord = serde_json::from_str(&line).map_err(|e| Error::parse(lineno + 1, e.to_string()))?;
        let mut sentence = AnnotatedSentence::from_forms(record.id, &record.tokens);
        let events = EventStructure {
            triggers: record
                .triggers
                .into_iter()
                .map(|t| Span::new(t.start, t.end, t.label))
                .collect(),
            arguments: record
                .arguments
                .into_iter()
                .map(|a| Argument {
                    span: Span::new(a.start, a.end, a.role),
                    trigger: a.trigger,
                })
                .collect(),
        };
        events
            .check(sentence.len())
            .map_err(|e| Error::validation(&sentence.id, e))?;
        sentence.events = Some(events);
        sentences.push(sentence);
    }
    Ok(sentences)
}

/// Writes one JSON record per sentence. Sentences without an event
/// structure are written with empty trigger and argument lists.
pub fn write_events<W: Write>(mut writer: W, sentences: &[AnnotatedSentence]) -> Result<()> {
    for sentence in sentences {
        let empty = EventStructure::default();
        let events = sentence.events.as_ref().unwrap_or(&empty);
        events
            .check(sentence.len())
            .map_err(|e| Error::validation(&sentence.id, e))?;
        let record = EventRecord {
            id: sentence.id.clone(),
            tokens: sentence.tokens.iter().map(|t| t.form.clone()).collect(),
            triggers: events
                .triggers
                .iter()
                .map(|t| TriggerRecord {
                    start: t.start,
                    end: t.end,
                    label: t.label.clone(),
                })
                .collect(),
            arguments: events
                .arguments
                .iter()
                .map(|a| ArgumentRecord {
                    start: a.span.start,
                    end: a.span.end,
                    role: a.span.label.clone(),
                    trigger: a.trigger,
                })
                .collect(),
        };
        serde_json::to_writer(&mut writer, &record).map_err(std::io::Error::from)?;
        writeln!(writer)?;
    }
    Ok(())
}
