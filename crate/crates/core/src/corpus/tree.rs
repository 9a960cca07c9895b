use thiserror::Error;

use super::Head;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("{heads} heads for {deprels} deprels")]
    LengthMismatch { heads: usize, deprels: usize },
    #[error("token {token} has head {head} outside the sentence")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("token {0} is its own head")]
    SelfLoop(usize),
    #[error("expected exactly one root, found {0}")]
    RootCount(usize),
    #[error("cycle through token {0}")]
    Cycle(usize),
}

/// A complete dependency tree: every token has a head, exactly one token
/// attaches to the root, and following heads always terminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepTree {
    heads: Vec<Head>,
    deprels: Vec<String>,
}

impl DepTree {
    pub fn new(heads: Vec<Head>, deprels: Vec<String>) -> Result<Self, TreeError> {
        if heads.len() != deprels.len() {
            return Err(TreeError::LengthMismatch {
                heads: heads.len(),
                deprels: deprels.len(),
            });
        }
        check_heads(&heads)?;
        Ok(DepTree { heads, deprels })
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    pub fn heads(&self) -> &[Head] {
        &self.heads
    }

    pub fn deprels(&self) -> &[String] {
        &self.deprels
    }

    pub fn root(&self) -> Option<usize> {
        self.heads.iter().position(|h| *h == Head::Root)
    }

    /// Edge count from the root for every token.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        for start in 0..self.len() {
            let mut path = Vec::new();
            let mut cur = start;
            let mut d = loop {
                if depth[cur] != usize::MAX {
                    break depth[cur] + 1;
                }
                path.push(cur);
                match self.heads[cur] {
                    Head::Root => break 0,
                    Head::Token(h) => cur = h,
                }
            };
            for &node in path.iter().rev() {
                depth[node] = d;
                d += 1;
            }
        }
        depth
    }
}

/// Single root, in-range heads, no self loops, no cycles.
pub(crate) fn check_heads(heads: &[Head]) -> Result<(), TreeError> {
    let n = heads.len();
    let mut roots = 0;
    for (i, head) in heads.iter().enumerate() {
        match *head {
            Head::Root => roots += 1,
            Head::Token(h) if h >= n => return Err(TreeError::HeadOutOfRange { token: i, head: h }),
            Head::Token(h) if h == i => return Err(TreeError::SelfLoop(i)),
            Head::Token(_) => {}
        }
    }
    if n > 0 && roots != 1 {
        return Err(TreeError::RootCount(roots));
    }
    if let Some(node) = find_cycle(heads) {
        return Err(TreeError::Cycle(node));
    }
    Ok(())
}

/// Returns some member of a cycle, if the head graph contains one.
/// Out-of-range heads are treated as attachments to the root.
pub(crate) fn find_cycle(heads: &[Head]) -> Option<usize> {
    // 0 = unvisited, 1 = on current walk, 2 = known to reach the root
    let mut state = vec![0u8; heads.len()];
    for start in 0..heads.len() {
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            match state[cur] {
                2 => break,
                1 => return Some(cur),
                _ => {}
            }
            state[cur] = 1;
            walk.push(cur);
            match heads[cur] {
                Head::Token(h) if h < heads.len() => cur = h,
                _ => break,
            }
        }
        for node in walk {
            state[node] = 2;
        }
    }
    None
}
