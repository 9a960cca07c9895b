use super::{check_alignment, ProjectionPolicy, TagChoice};
use crate::align::Alignment;
use crate::error::Result;

/// Token-based projection: each aligned target token takes a tag from its
/// aligned source tokens, every other target token takes the fill tag.
pub fn project_tags<S: AsRef<str>>(
    source_tags: &[S],
    tgt_len: usize,
    alignment: &Alignment,
    policy: &ProjectionPolicy,
) -> Result<Vec<String>> {
    check_alignment(alignment, source_tags.len(), tgt_len)?;
    let sources = alignment.sources_by_target(tgt_len);
    Ok(sources
        .iter()
        .map(|aligned| match choose(source_tags, aligned, policy.tag_choice) {
            Some(tag) => tag.to_string(),
            None => policy.fill_tag.clone(),
        })
        .collect())
}

/// `aligned` is sorted by source position.
fn choose<'a, S: AsRef<str>>(tags: &'a [S], aligned: &[usize], rule: TagChoice) -> Option<&'a str> {
    let first = tags[*aligned.first()?].as_ref();
    match rule {
        TagChoice::Leftmost => Some(first),
        TagChoice::MajorityThenLeftmost => {
            // (tag, count) in order of first appearance, so the strict `>`
            // below keeps the leftmost tag among ties.
            let mut counts: Vec<(&str, usize)> = Vec::new();
            for &s in aligned {
                let tag = tags[s].as_ref();
                match counts.iter_mut().find(|(t, _)| *t == tag) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((tag, 1)),
                }
            }
            let mut best = counts[0];
            for &(tag, c) in &counts[1..] {
                if c > best.1 {
                    best = (tag, c);
                }
            }
            Some(best.0)
        }
    }
}
