use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Alignment, LinkSet, Strength};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    Intersection,
    Union,
    GrowDiagFinalAnd,
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intersection" | "intersect" => Ok(Heuristic::Intersection),
            "union" => Ok(Heuristic::Union),
            "grow-diag-final-and" | "gdfa" => Ok(Heuristic::GrowDiagFinalAnd),
            other => Err(Error::InvalidArgument(format!(
                "unknown symmetrization heuristic {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Intersection => "intersection",
            Heuristic::Union => "union",
            Heuristic::GrowDiagFinalAnd => "grow-diag-final-and",
        })
    }
}

const NEIGHBORS: [(isize, isize); 8] = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Combines a source-to-target and a target-to-source alignment of the
/// same pair. Both inputs use `(source, target)` coordinates; transpose a
/// backward model's output first. All result links are sure.
pub fn symmetrize(forward: &Alignment, backward: &Alignment, heuristic: Heuristic) -> Result<Alignment> {
    let dims = match (forward.dims(), backward.dims()) {
        (Some(f), Some(b)) if f != b => {
            return Err(Error::InvalidArgument(format!(
                "forward alignment is {}x{} but backward is {}x{}",
                f.0, f.1, b.0, b.1
            )))
        }
        (Some(d), _) | (None, Some(d)) => d,
        (None, None) => {
            let all = forward.pairs().into_iter().chain(backward.pairs());
            all.fold((0, 0), |(s, t), (i, j)| (s.max(i + 1), t.max(j + 1)))
        }
    };

    let fwd = forward.pairs();
    let bwd = backward.pairs();
    if let Some(&(s, t)) = fwd.iter().chain(&bwd).find(|&&(s, t)| s >= dims.0 || t >= dims.1) {
        return Err(Error::InvalidArgument(format!(
            "link {s}-{t} outside a {}x{} sentence pair",
            dims.0, dims.1
        )));
    }
    let links: LinkSet = match heuristic {
        Heuristic::Intersection => fwd.intersection(&bwd).copied().collect(),
        Heuristic::Union => fwd.union(&bwd).copied().collect(),
        Heuristic::GrowDiagFinalAnd => grow_diag_final_and(&fwd, &bwd, dims),
    };

    let mut out = Alignment::with_dims(dims.0, dims.1);
    for (s, t) in links {
        out.insert(s, t, Strength::Sure);
    }
    Ok(out)
}

/// Grow from the intersection toward neighbouring union links that cover
/// a still-unaligned word, then add remaining links from each direction
/// whose source and target are both unaligned.
fn grow_diag_final_and(fwd: &LinkSet, bwd: &LinkSet, (src_len, tgt_len): (usize, usize)) -> LinkSet {
    let union: LinkSet = fwd.union(bwd).copied().collect();
    let mut links: LinkSet = fwd.intersection(bwd).copied().collect();
    let mut src_aligned = vec![false; src_len];
    let mut tgt_aligned = vec![false; tgt_len];
    for &(s, t) in &links {
        src_aligned[s] = true;
        tgt_aligned[t] = true;
    }

    loop {
        let mut added = false;
        for s in 0..src_len {
            for t in 0..tgt_len {
                if !links.contains(&(s, t)) {
                    continue;
                }
                for (ds, dt) in NEIGHBORS {
                    let (Some(ns), Some(nt)) = (s.checked_add_signed(ds), t.checked_add_signed(dt)) else {
                        continue;
                    };
                    if ns >= src_len || nt >= tgt_len {
                        continue;
                    }
                    if (!src_aligned[ns] || !tgt_aligned[nt]) && union.contains(&(ns, nt)) && links.insert((ns, nt)) {
                        src_aligned[ns] = true;
                        tgt_aligned[nt] = true;
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    for direction in [fwd, bwd] {
        for &(s, t) in direction {
            if !src_aligned[s] && !tgt_aligned[t] {
                links.insert((s, t));
                src_aligned[s] = true;
                tgt_aligned[t] = true;
            }
        }
    }
    links
}
