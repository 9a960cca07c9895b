use super::{project_spans, ProjectionPolicy, ProjectionReport};
use crate::align::Alignment;
use crate::corpus::Span;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BioTag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

pub fn parse_tag(tag: &str) -> Option<BioTag<'_>> {
    if tag == "O" {
        return Some(BioTag::Outside);
    }
    match tag.split_at_checked(2)? {
        ("B-", label) if !label.is_empty() => Some(BioTag::Begin(label)),
        ("I-", label) if !label.is_empty() => Some(BioTag::Inside(label)),
        _ => None,
    }
}

fn parse_all<S: AsRef<str>>(tags: &[S]) -> Result<Vec<BioTag<'_>>> {
    tags.iter()
        .enumerate()
        .map(|(i, t)| {
            parse_tag(t.as_ref())
                .ok_or_else(|| Error::InvalidArgument(format!("invalid BIO tag {:?} at position {i}", t.as_ref())))
        })
        .collect()
}

/// Every `I-X` directly follows `B-X` or `I-X`.
pub fn is_valid_bio<S: AsRef<str>>(tags: &[S]) -> bool {
    let mut prev: Option<&str> = None;
    for tag in tags {
        match parse_tag(tag.as_ref()) {
            None => return false,
            Some(BioTag::Outside) => prev = None,
            Some(BioTag::Begin(l)) => prev = Some(l),
            Some(BioTag::Inside(l)) => {
                if prev != Some(l) {
                    return false;
                }
            }
        }
    }
    true
}

/// Rewrites any tag sequence into valid BIO.
///
/// A run is a `B-*` or `I-*` tag followed by consecutive `I-*` tags of
/// any type. Each run becomes one entity typed after its last tag, so a
/// stray `I-X` opens a new `B-X` and `B-X I-Y I-Z` turns into
/// `B-Z I-Z I-Z`. Valid input comes back unchanged.
pub fn repair_bio<S: AsRef<str>>(tags: &[S]) -> Result<Vec<String>> {
    let parsed = parse_all(tags)?;
    let mut out = Vec::with_capacity(parsed.len());
    let mut i = 0;
    while i < parsed.len() {
        let label = match parsed[i] {
            BioTag::Outside => {
                out.push("O".to_string());
                i += 1;
                continue;
            }
            BioTag::Begin(l) | BioTag::Inside(l) => l,
        };
        let mut end = i + 1;
        let mut last = label;
        while let Some(BioTag::Inside(l)) = parsed.get(end) {
            last = l;
            end += 1;
        }
        out.push(format!("B-{last}"));
        out.extend((i + 1..end).map(|_| format!("I-{last}")));
        i = end;
    }
    Ok(out)
}

/// Entity spans of a valid BIO sequence.
pub fn bio_to_spans<S: AsRef<str>>(tags: &[S]) -> Result<Vec<Span>> {
    let parsed = parse_all(tags)?;
    let mut spans: Vec<Span> = Vec::new();
    let mut open = false;
    for (i, tag) in parsed.iter().enumerate() {
        match *tag {
            BioTag::Outside => open = false,
            BioTag::Begin(l) => {
                spans.push(Span::new(i, i, l));
                open = true;
            }
            BioTag::Inside(l) => match spans.last_mut() {
                Some(span) if open && span.label == l => span.end = i,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "I-{l} at position {i} does not continue an entity"
                    )))
                }
            },
        }
    }
    Ok(spans)
}

/// Linearizes non-overlapping spans into BIO tags over `len` tokens.
/// A span overlapping an earlier one in the list is skipped.
pub fn spans_to_bio(spans: &[Span], len: usize) -> Vec<String> {
    let mut tags = vec!["O".to_string(); len];
    let mut taken = vec![false; len];
    for span in spans {
        if span.start > span.end || span.end >= len || taken[span.start..=span.end].iter().any(|&t| t) {
            continue;
        }
        tags[span.start] = format!("B-{}", span.label);
        taken[span.start] = true;
        for i in span.start + 1..=span.end {
            tags[i] = format!("I-{}", span.label);
            taken[i] = true;
        }
    }
    tags
}

/// Span-based projection of a BIO sequence. The source is repaired first
/// (counted in the report) and the result is always valid BIO.
pub fn project_bio<S: AsRef<str>>(
    source_tags: &[S],
    tgt_len: usize,
    alignment: &Alignment,
    policy: &ProjectionPolicy,
) -> Result<(Vec<String>, ProjectionReport)> {
    let repaired = repair_bio(source_tags)?;
    let changed = repaired
        .iter()
        .zip(source_tags)
        .filter(|(r, s)| r.as_str() != s.as_ref())
        .count();
    let spans = bio_to_spans(&repaired)?;
    let (target, mut report) = project_spans(&spans, source_tags.len(), tgt_len, alignment, policy)?;
    report.repaired_tags = changed;
    Ok((repair_bio(&spans_to_bio(&target, tgt_len))?, report))
}
