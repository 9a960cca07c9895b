mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use xlproj::align::{
    f_measure, score_alignment, score_corpus, symmetrize, Alignment, Averaging, BidirectionalModel, Heuristic,
    LexiconModel, TrainConfig,
};
use xlproj::corpus::{AnnotatedSentence, Bitext};

use common::{random_alignment, rng};

fn bitext(pairs: &[(Vec<String>, Vec<String>)]) -> Bitext {
    let (s, t): (Vec<_>, Vec<_>) = pairs
        .iter()
        .enumerate()
        .map(|(i, (s, t))| {
            (
                AnnotatedSentence::from_forms(i.to_string(), s),
                AnnotatedSentence::from_forms(i.to_string(), t),
            )
        })
        .unzip();
    Bitext::zip(s, t).unwrap()
}

fn toy_corpus(seed: u64) -> Bitext {
    let mut r = rng(seed);
    let n_pairs = r.gen_range(1..=20);
    let vocab = r.gen_range(1..=10);
    let pairs: Vec<_> = (0..n_pairs)
        .map(|_| {
            let s = (0..r.gen_range(1..6))
                .map(|_| format!("s{}", r.gen_range(0..vocab)))
                .collect();
            let t = (0..r.gen_range(1..6))
                .map(|_| format!("t{}", r.gen_range(0..vocab)))
                .collect();
            (s, t)
        })
        .collect();
    bitext(&pairs)
}

#[test]
fn log_likelihood_never_decreases() {
    for seed in 0..100 {
        let corpus = toy_corpus(seed);
        for null_prob in [None, Some(0.2)] {
            let config = TrainConfig {
                iterations: 10,
                smoothing: 0.0,
                null_prob,
            };
            let model = LexiconModel::train(&corpus, &config).unwrap();
            let ll = model.log_likelihood();
            assert_eq!(ll.len(), 10);
            for w in ll.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "seed {seed}: {} then {}", w[0], w[1]);
            }
        }
    }
}

/// Sentence pairs over a one-to-one dictionary, target words shuffled.
fn dictionary_corpus(seed: u64, pairs: usize) -> (Bitext, Vec<Alignment>) {
    let mut r = rng(seed);
    let mut data = Vec::new();
    let mut gold = Vec::new();
    for _ in 0..pairs {
        let mut words: Vec<usize> = (0..12).collect();
        words.shuffle(&mut r);
        words.truncate(r.gen_range(2..6));
        let mut order: Vec<usize> = (0..words.len()).collect();
        order.shuffle(&mut r);
        let src: Vec<String> = words.iter().map(|w| format!("en{w}")).collect();
        let tgt: Vec<String> = order.iter().map(|&i| format!("xx{}", words[i])).collect();
        gold.push(Alignment::from_pairs(order.iter().enumerate().map(|(t, &s)| (s, t))));
        data.push((src, tgt));
    }
    (bitext(&data), gold)
}

#[test]
fn dictionary_corpus_aligns_perfectly() {
    let (corpus, gold) = dictionary_corpus(11, 50);
    let config = TrainConfig {
        iterations: 20,
        ..TrainConfig::default()
    };
    let model = BidirectionalModel::train(&corpus, &config).unwrap();
    let hyp = model.align(&corpus, Heuristic::Intersection).unwrap();
    let score = score_corpus(&hyp, &gold, Averaging::Micro).unwrap();
    assert_eq!(score.aer, 0.0);
}

#[test]
fn model_file_reproduces_alignments() {
    let (corpus, _) = dictionary_corpus(3, 30);
    let model = BidirectionalModel::train(&corpus, &TrainConfig::default()).unwrap();
    let reloaded = BidirectionalModel::from_json(&model.to_json()).unwrap();
    assert_eq!(reloaded.to_json(), model.to_json());
    assert_eq!(
        reloaded.align(&corpus, Heuristic::GrowDiagFinalAnd).unwrap(),
        model.align(&corpus, Heuristic::GrowDiagFinalAnd).unwrap()
    );
}

proptest! {
    #[test]
    fn heuristics_are_nested(seed in any::<u64>(), src in 1usize..8, tgt in 1usize..8) {
        let mut r = rng(seed);
        let f = random_alignment(&mut r, src, tgt).bind(src, tgt).unwrap();
        let b = random_alignment(&mut r, src, tgt).bind(src, tgt).unwrap();
        let inter = symmetrize(&f, &b, Heuristic::Intersection).unwrap().pairs();
        let grow = symmetrize(&f, &b, Heuristic::GrowDiagFinalAnd).unwrap().pairs();
        let union = symmetrize(&f, &b, Heuristic::Union).unwrap().pairs();
        prop_assert!(inter.is_subset(&grow));
        prop_assert!(grow.is_subset(&union));
        prop_assert_eq!(inter, f.pairs().intersection(&b.pairs()).copied().collect());
        prop_assert_eq!(union, f.pairs().union(&b.pairs()).copied().collect());
    }

    #[test]
    fn aer_is_one_minus_f_with_sure_only_gold(seed in any::<u64>(), src in 1usize..8, tgt in 1usize..8) {
        let mut r = rng(seed);
        let hyp = random_alignment(&mut r, src, tgt);
        let gold = random_alignment(&mut r, src, tgt).pairs();
        let s = score_alignment(&hyp, &gold, &gold).unwrap().score();
        prop_assert_eq!(s.aer, 1.0 - s.f);
        prop_assert!((s.f - f_measure(s.precision, s.recall)).abs() < 1e-12);
    }
}

/// (AER, P, R, F) as printed for GALE EN-AR.
const GALE_EN_AR: [(&str, f64, f64, f64, f64); 13] = [
    ("fast-align", 47.4, 53.9, 51.4, 52.6),
    ("mBERT", 35.6, 78.5, 54.5, 64.4),
    ("GBv4", 32.7, 85.6, 55.4, 67.3),
    ("XLM-R", 40.1, 78.6, 48.4, 59.9),
    ("L64K", 34.0, 81.5, 55.5, 66.0),
    ("L128K", 35.1, 80.0, 54.5, 64.9),
    ("mBERT ft", 30.0, 81.9, 61.2, 70.0),
    ("GBv4 ft", 29.3, 86.9, 59.7, 70.7),
    ("XLM-R ft", 27.8, 90.3, 60.2, 72.2),
    ("L64K ft", 29.1, 84.9, 60.9, 70.9),
    ("L128K ft", 32.2, 80.3, 58.7, 67.8),
    ("XLM-R ft.s", 23.3, 92.5, 65.6, 76.7),
    ("L128K ft.s", 23.5, 93.7, 64.6, 76.5),
];

#[test]
fn published_alignment_rows_are_consistent() {
    for (name, aer, p, r, f) in GALE_EN_AR {
        let ours = 100.0 * f_measure(p / 100.0, r / 100.0);
        assert!((ours - f).abs() <= 0.1, "{name}: F {ours:.3} vs {f}");
        assert!(
            ((100.0 - ours) - aer).abs() <= 0.1,
            "{name}: AER {:.3} vs {aer}",
            100.0 - ours
        );
    }
}
