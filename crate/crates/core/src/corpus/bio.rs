use std::io::{BufRead, Write};

use super::{AnnotatedSentence, Token};
use crate::error::{Error, Result};

/// Reads two-column `token<TAB>tag` data with blank lines between
/// sentences. Tags are kept verbatim; invalid BIO sequences are accepted
/// here and fixed later by repair.
pub fn read_bio<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();

    let flush = |tokens: &mut Vec<Token>, tags: &mut Vec<String>, out: &mut Vec<AnnotatedSentence>| {
        if tokens.is_empty() {
            return;
        }
        let mut s = AnnotatedSentence::new((out.len() + 1).to_string(), std::mem::take(tokens));
        s.bio = Some(std::mem::take(tags));
        out.push(s);
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            flush(&mut tokens, &mut tags, &mut sentences);
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(Error::parse(
                lineno + 1,
                format!("expected token and tag, found {} columns", cols.len()),
            ));
        }
        tokens.push(Token::new(tokens.len(), cols[0]));
        tags.push(cols[1].to_string());
    }
    flush(&mut tokens, &mut tags, &mut sentences);
    Ok(sentences)
}

pub fn write_bio<W: Write>(mut writer: W, sentences: &[AnnotatedSentence]) -> Result<()> {
    for sentence in sentences {
        sentence.require_bio()?;
    }
    for sentence in sentences {
        let tags = sentence.require_bio()?;
        for (token, tag) in sentence.tokens.iter().zip(tags) {
            writeln!(writer, "{}\t{}", token.form, tag)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}
