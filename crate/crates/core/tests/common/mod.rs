#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xlproj::align::Alignment;
use xlproj::corpus::{AnnotatedSentence, Argument, DepTree, EventStructure, Head, Span};
use xlproj::project::repair_bio;

pub const UPOS: [&str; 8] = ["NOUN", "VERB", "DET", "ADJ", "PUNCT", "SYM", "PRON", "ADP"];
pub const DEPRELS: [&str; 6] = ["nsubj", "obj", "det", "amod", "punct", "obl"];
pub const LABELS: [&str; 3] = ["PER", "LOC", "ORG"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly shaped random tree: a random token order, each token
/// attached to one placed before it.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> DepTree {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut heads = vec![Head::Root; n];
    for k in 1..n {
        heads[order[k]] = Head::Token(order[rng.gen_range(0..k)]);
    }
    let deprels = (0..n)
        .map(|i| {
            if heads[i] == Head::Root {
                "root".to_string()
            } else {
                DEPRELS[rng.gen_range(0..DEPRELS.len())].to_string()
            }
        })
        .collect();
    DepTree::new(heads, deprels).unwrap()
}

/// Arbitrary tag strings from the BIO alphabet, valid or not.
pub fn random_tags(rng: &mut impl Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => "O".to_string(),
            1 => format!("B-{}", LABELS[rng.gen_range(0..LABELS.len())]),
            _ => format!("I-{}", LABELS[rng.gen_range(0..LABELS.len())]),
        })
        .collect()
}

pub fn random_bio(rng: &mut impl Rng, n: usize) -> Vec<String> {
    repair_bio(&random_tags(rng, n)).unwrap()
}

pub fn random_span(rng: &mut impl Rng, n: usize, labels: &[&str]) -> Span {
    let start = rng.gen_range(0..n);
    let end = rng.gen_range(start..n.min(start + 3));
    Span::new(start, end, labels[rng.gen_range(0..labels.len())])
}

pub fn random_events(rng: &mut impl Rng, n: usize) -> EventStructure {
    let triggers: Vec<Span> = (0..rng.gen_range(0..3))
        .map(|_| random_span(rng, n, &["Attack", "Move"]))
        .collect();
    let arguments = if triggers.is_empty() {
        Vec::new()
    } else {
        (0..rng.gen_range(0..4))
            .map(|_| Argument {
                span: random_span(rng, n, &["Agent", "Place"]),
                trigger: rng.gen_range(0..triggers.len()),
            })
            .collect()
    };
    EventStructure { triggers, arguments }
}

/// Random sparse alignment between sentences of the given lengths.
pub fn random_alignment(rng: &mut impl Rng, src: usize, tgt: usize) -> Alignment {
    let mut a = Alignment::new();
    if src == 0 || tgt == 0 {
        return a;
    }
    for _ in 0..rng.gen_range(0..=src + tgt) {
        a.insert(
            rng.gen_range(0..src),
            rng.gen_range(0..tgt),
            xlproj::align::Strength::Sure,
        );
    }
    a
}

/// Sentence carrying every annotation layer.
pub fn annotated(rng: &mut impl Rng, id: &str, n: usize) -> AnnotatedSentence {
    let forms: Vec<String> = (0..n).map(|i| format!("w{}_{i}", rng.gen_range(0..50))).collect();
    let mut s = AnnotatedSentence::from_forms(id, &forms);
    s.set_upos((0..n).map(|_| UPOS[rng.gen_range(0..UPOS.len())].to_string()).collect());
    s.set_tree(&random_tree(rng, n));
    s.bio = Some(random_bio(rng, n));
    s.events = Some(random_events(rng, n));
    s
}
