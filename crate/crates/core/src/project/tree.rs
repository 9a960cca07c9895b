//! Dependency tree projection.
//!
//! 1. Each aligned target token is anchored to the aligned source token
//!    highest in the source tree (smallest depth, then leftmost).
//! 2. Target tokens sharing an anchor form a cluster; its leftmost member
//!    represents it and the others attach to the representative.
//! 3. A representative's head is the representative of its anchor's
//!    closest aligned ancestor. Without one it becomes a root candidate.
//! 4. It keeps the relation label of its anchor.
//! 5. The candidate anchored highest becomes the root; other candidates
//!    and unaligned target tokens attach to it.
//! 6. Any remaining cycle is cut at its lowest-index member.

use super::{check_alignment, ProjectionPolicy};
use crate::align::Alignment;
use crate::corpus::{find_cycle, DepTree, Head};
use crate::error::{Error, Result};

const ROOT_DEPREL: &str = "root";

pub fn project_tree(
    source: &DepTree,
    tgt_len: usize,
    alignment: &Alignment,
    policy: &ProjectionPolicy,
) -> Result<DepTree> {
    check_alignment(alignment, source.len(), tgt_len)?;
    if tgt_len == 0 {
        return DepTree::new(Vec::new(), Vec::new()).map_err(|e| Error::InvalidArgument(e.to_string()));
    }
    let depth = source.depths();
    let src_heads = source.heads();
    let src_deprels = source.deprels();

    let anchor: Vec<Option<usize>> = alignment
        .sources_by_target(tgt_len)
        .iter()
        .map(|sources| sources.iter().copied().min_by_key(|&s| (depth[s], s)))
        .collect();

    let mut representative: Vec<Option<usize>> = vec![None; source.len()];
    for (t, a) in anchor.iter().enumerate() {
        if let Some(s) = *a {
            representative[s].get_or_insert(t);
        }
    }

    let mut heads: Vec<Option<Head>> = vec![None; tgt_len];
    let mut deprels: Vec<String> = vec![policy.attach_deprel.clone(); tgt_len];
    let mut candidates: Vec<usize> = Vec::new();

    for t in 0..tgt_len {
        let Some(s) = anchor[t] else { continue };
        let rep = representative[s].expect("anchored source has a representative");
        if rep != t {
            heads[t] = Some(Head::Token(rep));
            continue;
        }
        let mut up = src_heads[s];
        loop {
            match up {
                Head::Root => {
                    candidates.push(t);
                    break;
                }
                Head::Token(a) => match representative[a] {
                    Some(r) => {
                        heads[t] = Some(Head::Token(r));
                        deprels[t] = src_deprels[s].clone();
                        break;
                    }
                    None => up = src_heads[a],
                },
            }
        }
    }

    let root = candidates
        .iter()
        .copied()
        .min_by_key(|&t| {
            let s = anchor[t].expect("candidates are anchored");
            (depth[s], s)
        })
        .unwrap_or(0);
    heads[root] = Some(Head::Root);
    deprels[root] = match anchor[root] {
        Some(s) if src_heads[s] == Head::Root => src_deprels[s].clone(),
        _ => ROOT_DEPREL.to_string(),
    };
    for h in heads.iter_mut().filter(|h| h.is_none()) {
        *h = Some(Head::Token(root));
    }

    let mut heads: Vec<Head> = heads.into_iter().map(|h| h.expect("every token attached")).collect();
    while let Some(member) = find_cycle(&heads) {
        let mut cycle = vec![member];
        let mut cur = heads[member].index().expect("cycle members have token heads");
        while cur != member {
            cycle.push(cur);
            cur = heads[cur].index().expect("cycle members have token heads");
        }
        let lowest = *cycle.iter().min().expect("non-empty cycle");
        heads[lowest] = Head::Token(root);
        deprels[lowest] = policy.attach_deprel.clone();
    }

    DepTree::new(heads, deprels).map_err(|e| Error::InvalidArgument(format!("projected tree: {e}")))
}
