use std::io::{BufRead, Write};

use super::{AnnotatedSentence, Head, Token};
use crate::error::{Error, Result};

const COLUMNS: usize = 10;

/// Reads CoNLL-U text. Multiword-token ranges (`1-2`) and empty nodes
/// (`1.1`) are skipped so that sentences consist of syntactic words only.
///
/// The sentence id comes from a `# sent_id = ...` comment when present,
/// otherwise from the 1-based ordinal of the sentence in the stream.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    let mut block = Block::default();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let line = line.trim_end_matches('\r');

        if line.trim().is_empty() {
            if !block.is_empty() {
                sentences.push(block.finish(sentences.len() + 1)?);
            }
            block = Block::default();
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    block.id = Some(value.trim().to_string());
                }
            }
            block.seen_content = true;
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != COLUMNS {
            return Err(Error::parse(
                lineno,
                format!("expected {COLUMNS} tab-separated columns, found {}", cols.len()),
            ));
        }
        block.seen_content = true;
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id
            .parse()
            .map_err(|_| Error::parse(lineno, format!("invalid token id {id:?}")))?;
        if id != block.tokens.len() + 1 {
            return Err(Error::parse(
                lineno,
                format!("token id {id} out of sequence, expected {}", block.tokens.len() + 1),
            ));
        }
        let head = match cols[6] {
            "_" => None,
            h => match h.parse::<usize>() {
                Ok(0) => Some(Head::Root),
                Ok(h) => Some(Head::Token(h - 1)),
                Err(_) => return Err(Error::parse(lineno, format!("invalid head {h:?}"))),
            },
        };
        block.tokens.push(Token {
            index: id - 1,
            form: cols[1].to_string(),
            upos: optional(cols[3]),
            head,
            deprel: optional(cols[7]),
        });
    }
    if !block.is_empty() {
        sentences.push(block.finish(sentences.len() + 1)?);
    }
    Ok(sentences)
}

fn optional(col: &str) -> Option<String> {
    (col != "_").then(|| col.to_string())
}

#[derive(Default)]
struct Block {
    id: Option<String>,
    tokens: Vec<Token>,
    seen_content: bool,
}

impl Block {
    fn is_empty(&self) -> bool {
        !self.seen_content
    }

    fn finish(self, ordinal: usize) -> Result<AnnotatedSentence> {
        let id = self.id.unwrap_or_else(|| ordinal.to_string());
        let sentence = AnnotatedSentence::new(id, self.tokens);
        sentence.validate()?;
        Ok(sentence)
    }
}

/// Writes CoNLL-U, requiring UPOS, head and deprel on every token.
pub fn write_conllu<W: Write>(mut writer: W, sentences: &[AnnotatedSentence]) -> Result<()> {
    for sentence in sentences {
        for token in &sentence.tokens {
            if token.upos.is_none() {
                return Err(Error::missing(&sentence.id, "upos"));
            }
            if token.head.is_none() {
                return Err(Error::missing(&sentence.id, "head"));
            }
            if token.deprel.is_none() {
                return Err(Error::missing(&sentence.id, "deprel"));
            }
        }
    }
    write_conllu_partial(&mut writer, sentences)
}

/// Writes CoNLL-U with `_` in place of any missing UPOS, head or deprel.
/// Used for corpora that carry only part of the annotation, such as
/// projected POS tags without a tree.
pub fn write_conllu_partial<W: Write>(mut writer: W, sentences: &[AnnotatedSentence]) -> Result<()> {
    for sentence in sentences {
        writeln!(writer, "# sent_id = {}", sentence.id)?;
        for token in &sentence.tokens {
            let head = match token.head {
                None => "_".to_string(),
                Some(Head::Root) => "0".to_string(),
                Some(Head::Token(h)) => (h + 1).to_string(),
            };
            writeln!(
                writer,
                "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
                token.index + 1,
                token.form,
                token.upos.as_deref().unwrap_or("_"),
                head,
                token.deprel.as_deref().unwrap_or("_"),
            )?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
