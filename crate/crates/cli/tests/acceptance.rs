//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//!     cargo test -p xlproj-cli --test acceptance

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xlproj::align::{
    f_measure, score_corpus, Alignment, Averaging, BidirectionalModel, Heuristic, LexiconModel, Strength, TrainConfig,
};
use xlproj::corpus::{AnnotatedSentence, Argument, Bitext, DepTree, EventStructure, Head, Span};
use xlproj::eval::{entity_f1, las_uas, pos_accuracy};
use xlproj::project::{
    bio_to_spans, is_valid_bio, project_bio, project_events, project_spans, project_tags, project_tree, repair_bio,
    ProjectionPolicy,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const UPOS: [&str; 8] = ["NOUN", "VERB", "DET", "ADJ", "PUNCT", "SYM", "PRON", "ADP"];
const DEPRELS: [&str; 6] = ["nsubj", "obj", "det", "amod", "punct", "obl"];
const LABELS: [&str; 3] = ["PER", "LOC", "ORG"];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure!(
        elapsed < Duration::from_secs(limit_secs),
        "took {:.2}s, limit {limit_secs}s",
        elapsed.as_secs_f64()
    );
    Ok(())
}

// ---- generators ----------------------------------------------------------

fn random_tree(r: &mut impl Rng, n: usize) -> DepTree {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut heads = vec![Head::Root; n];
    for k in 1..n {
        heads[order[k]] = Head::Token(order[r.gen_range(0..k)]);
    }
    let deprels = (0..n)
        .map(|i| match heads[i] {
            Head::Root => "root".to_string(),
            _ => DEPRELS[r.gen_range(0..DEPRELS.len())].to_string(),
        })
        .collect();
    DepTree::new(heads, deprels).unwrap()
}

fn random_tags(r: &mut impl Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| match r.gen_range(0..3) {
            0 => "O".to_string(),
            1 => format!("B-{}", LABELS[r.gen_range(0..3)]),
            _ => format!("I-{}", LABELS[r.gen_range(0..3)]),
        })
        .collect()
}

fn random_span(r: &mut impl Rng, n: usize, labels: &[&str]) -> Span {
    let start = r.gen_range(0..n);
    let end = r.gen_range(start..n.min(start + 3));
    Span::new(start, end, labels[r.gen_range(0..labels.len())])
}

fn random_alignment(r: &mut impl Rng, src: usize, tgt: usize) -> Alignment {
    let mut a = Alignment::new();
    for _ in 0..r.gen_range(0..=src + tgt) {
        a.insert(r.gen_range(0..src), r.gen_range(0..tgt), Strength::Sure);
    }
    a
}

fn annotated(r: &mut impl Rng, id: &str, n: usize) -> AnnotatedSentence {
    let forms: Vec<String> = (0..n).map(|i| format!("w{}_{i}", r.gen_range(0..50))).collect();
    let mut s = AnnotatedSentence::from_forms(id, &forms);
    s.set_upos((0..n).map(|_| UPOS[r.gen_range(0..UPOS.len())].to_string()).collect());
    s.set_tree(&random_tree(r, n));
    s.bio = Some(repair_bio(&random_tags(r, n)).unwrap());
    let triggers: Vec<Span> = (0..r.gen_range(0..3))
        .map(|_| random_span(r, n, &["Attack", "Move"]))
        .collect();
    let arguments = if triggers.is_empty() {
        Vec::new()
    } else {
        (0..r.gen_range(0..4))
            .map(|_| Argument {
                span: random_span(r, n, &["Agent", "Place"]),
                trigger: r.gen_range(0..triggers.len()),
            })
            .collect()
    };
    s.events = Some(EventStructure { triggers, arguments });
    s
}

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

// ---- criteria ------------------------------------------------------------

/// (AER, P, R, F) for GALE EN-AR.
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

fn alignment_table() -> Outcome {
    let t = Instant::now();
    for (name, aer, p, r, f) in GALE_EN_AR {
        let ours = 100.0 * f_measure(p / 100.0, r / 100.0);
        ensure!((ours - f).abs() <= 0.1, "{name}: F {ours:.2} vs {f}");
        ensure!(
            ((100.0 - ours) - aer).abs() <= 0.1,
            "{name}: AER {:.2} vs {aer}",
            100.0 - ours
        );
    }
    within(t.elapsed(), 1)?;
    Ok(format!("{} rows", GALE_EN_AR.len()))
}

fn em_monotonicity() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for seed in 0..100 {
        let mut r = rng(seed);
        let vocab = r.gen_range(1..=10);
        let pairs: Vec<_> = (0..r.gen_range(1..=20))
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
        let corpus = bitext(&pairs);
        let config = TrainConfig {
            iterations: 10,
            smoothing: 0.0,
            null_prob: None,
        };
        let model = LexiconModel::train(&corpus, &config).map_err(|e| e.to_string())?;
        let ll = model.log_likelihood();
        ensure!(ll.len() == 10, "seed {seed}: {} iterations recorded", ll.len());
        for (i, w) in ll.windows(2).enumerate() {
            ensure!(
                w[1] >= w[0] - 1e-9,
                "seed {seed} iteration {}: {} -> {}",
                i + 1,
                w[0],
                w[1]
            );
        }
        checked += 1;
    }
    within(t.elapsed(), 10)?;
    Ok(format!("{checked} corpora x 10 iterations"))
}

fn dictionary_alignment() -> Outcome {
    let t = Instant::now();
    let mut r = rng(11);
    let mut data = Vec::new();
    let mut gold = Vec::new();
    for _ in 0..50 {
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
    let config = TrainConfig {
        iterations: 20,
        ..TrainConfig::default()
    };
    let model = BidirectionalModel::train(&bitext(&data), &config).map_err(|e| e.to_string())?;
    let hyp = model
        .align(&bitext(&data), Heuristic::Intersection)
        .map_err(|e| e.to_string())?;
    let score = score_corpus(&hyp, &gold, Averaging::Micro).map_err(|e| e.to_string())?;
    ensure!(score.aer == 0.0, "AER {}", score.aer);
    within(t.elapsed(), 5)?;
    Ok("50 pairs, AER 0".to_string())
}

fn identity_projection() -> Outcome {
    let mut r = rng(2024);
    let policy = ProjectionPolicy::default();
    let fail = |i: usize, what: &str| format!("sentence {i}: {what} changed");
    for i in 0..100 {
        let n = 1 + i % 15;
        let s = annotated(&mut r, &i.to_string(), n);
        let id = Alignment::identity(n);

        let upos = s.upos().unwrap();
        ensure!(
            project_tags(&upos, n, &id, &policy).unwrap() == upos,
            "{}",
            fail(i, "tags")
        );
        let bio = s.bio.clone().unwrap();
        ensure!(
            project_bio(&bio, n, &id, &policy).unwrap().0 == bio,
            "{}",
            fail(i, "bio")
        );
        let spans = bio_to_spans(&bio).unwrap();
        ensure!(
            project_spans(&spans, n, n, &id, &policy).unwrap().0 == spans,
            "{}",
            fail(i, "spans")
        );
        let tree = s.require_tree().unwrap();
        ensure!(
            project_tree(&tree, n, &id, &policy).unwrap() == tree,
            "{}",
            fail(i, "tree")
        );
        let events = s.events.clone().unwrap();
        ensure!(
            project_events(&events, n, n, &id, &policy).unwrap().0 == events,
            "{}",
            fail(i, "events")
        );
    }
    Ok("100 sentences, 5 operations".to_string())
}

fn bio_repair() -> Outcome {
    let v = |tags: &[&str]| tags.iter().map(|t| t.to_string()).collect::<Vec<_>>();
    let examples = [
        (v(&["O", "I-PER", "O"]), v(&["O", "B-PER", "O"])),
        (v(&["B-LOC", "I-ORG", "I-PER"]), v(&["B-PER", "I-PER", "I-PER"])),
    ];
    for (input, expected) in &examples {
        let got = repair_bio(input).map_err(|e| e.to_string())?;
        ensure!(&got == expected, "{input:?} -> {got:?}, expected {expected:?}");
    }
    let mut r = rng(5);
    for case in 0..10_000 {
        let n = r.gen_range(0..20);
        let tags = random_tags(&mut r, n);
        let once = repair_bio(&tags).map_err(|e| e.to_string())?;
        ensure!(is_valid_bio(&once), "case {case}: {once:?} invalid");
        ensure!(repair_bio(&once).unwrap() == once, "case {case}: not idempotent");
    }
    Ok("10000 sequences, 2 examples".to_string())
}

fn span_filter() -> Outcome {
    let policy = ProjectionPolicy::default();
    let mut r = rng(6);
    let mut emitted = 0;
    for case in 0..10_000 {
        let (src, tgt) = (r.gen_range(1..10), r.gen_range(1..20));
        let spans: Vec<Span> = (0..r.gen_range(1..5))
            .map(|_| random_span(&mut r, src, &LABELS))
            .collect();
        let alignment = random_alignment(&mut r, src, tgt);
        let (out, _) = project_spans(&spans, src, tgt, &alignment, &policy).map_err(|e| e.to_string())?;
        for (i, a) in out.iter().enumerate() {
            ensure!(a.end < tgt, "case {case}: span past sentence end");
            for b in &out[i + 1..] {
                ensure!(!a.overlaps(b), "case {case}: {a:?} overlaps {b:?}");
            }
        }
        // Each source span alone: its image, if kept, is within 5x.
        for s in &spans {
            let (one, _) = project_spans(std::slice::from_ref(s), src, tgt, &alignment, &policy).unwrap();
            for a in one {
                ensure!(
                    a.len() <= 5 * s.len(),
                    "case {case}: {} tokens from {}",
                    a.len(),
                    s.len()
                );
            }
        }
        emitted += out.len();
    }
    Ok(format!("10000 cases, {emitted} spans emitted"))
}

fn reaches_root(heads: &[Head]) -> bool {
    (0..heads.len()).all(|start| {
        let mut cur = start;
        for _ in 0..heads.len() {
            match heads[cur] {
                Head::Root => return true,
                Head::Token(h) => cur = h,
            }
        }
        false
    })
}

fn tree_validity() -> Outcome {
    let policy = ProjectionPolicy::default();
    let mut r = rng(7);
    for case in 0..10_000 {
        let (src, tgt) = (r.gen_range(1..12), r.gen_range(1..15));
        let tree = random_tree(&mut r, src);
        let alignment = random_alignment(&mut r, src, tgt);
        let out = project_tree(&tree, tgt, &alignment, &policy).map_err(|e| format!("case {case}: {e}"))?;
        let heads = out.heads();
        ensure!(
            heads.len() == tgt,
            "case {case}: {} heads for {tgt} tokens",
            heads.len()
        );
        let roots = heads.iter().filter(|h| **h == Head::Root).count();
        ensure!(roots == 1, "case {case}: {roots} roots");
        ensure!(
            heads.iter().all(|h| h.index().is_none_or(|i| i < tgt)),
            "case {case}: head out of range"
        );
        ensure!(reaches_root(heads), "case {case}: cycle");
        ensure!(out.deprels().iter().all(|d| !d.is_empty()), "case {case}: empty deprel");
    }
    Ok("10000 cases".to_string())
}

fn naive_spans(tags: &[String]) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..tags.len() {
        if let Some(label) = tags[i].strip_prefix("B-") {
            let mut j = i + 1;
            while j < tags.len() && tags[j] == format!("I-{label}") {
                j += 1;
            }
            out.push((label.to_string(), i, j - 1));
        }
    }
    out
}

fn corpus_pair(seed: u64) -> (Vec<AnnotatedSentence>, Vec<AnnotatedSentence>) {
    let mut r = rng(seed);
    let mut pred = Vec::new();
    let mut gold = Vec::new();
    for i in 0..r.gen_range(1..5) {
        let n = r.gen_range(1..8);
        let forms: Vec<String> = (0..n).map(|k| format!("w{k}")).collect();
        let mut p = AnnotatedSentence::from_forms(i.to_string(), &forms);
        let mut g = p.clone();
        for s in [&mut p, &mut g] {
            s.set_upos((0..n).map(|_| UPOS[r.gen_range(0..6)].to_string()).collect());
            s.set_tree(&random_tree(&mut r, n));
            for t in &mut s.tokens {
                if r.gen_bool(0.3) {
                    t.deprel = Some(DEPRELS[r.gen_range(0..DEPRELS.len())].to_string());
                }
            }
            s.bio = Some(repair_bio(&random_tags(&mut r, n)).unwrap());
        }
        pred.push(p);
        gold.push(g);
    }
    (pred, gold)
}

fn metric_oracles() -> Outcome {
    for seed in 0..1_000 {
        let (pred, gold) = corpus_pair(seed);

        let (mut correct, mut n_pred, mut n_gold) = (0u64, 0u64, 0u64);
        let (mut same, mut total) = (0u64, 0u64);
        let (mut las, mut uas, mut scored) = (0u64, 0u64, 0u64);
        for (p, g) in pred.iter().zip(&gold) {
            let ps = naive_spans(p.bio.as_ref().unwrap());
            let gs = naive_spans(g.bio.as_ref().unwrap());
            correct += ps.iter().filter(|s| gs.contains(s)).count() as u64;
            n_pred += ps.len() as u64;
            n_gold += gs.len() as u64;
            for (a, b) in p.tokens.iter().zip(&g.tokens) {
                total += 1;
                same += (a.upos == b.upos) as u64;
                if matches!(b.upos.as_deref(), Some("PUNCT" | "SYM")) {
                    continue;
                }
                scored += 1;
                if a.head == b.head {
                    uas += 1;
                    las += (a.deprel == b.deprel) as u64;
                }
            }
        }
        let f1 = entity_f1(&pred, &gold).map_err(|e| e.to_string())?;
        let f1 = f1.get("f1").unwrap();
        ensure!(
            (f1.numerator, f1.denominator) == (2 * correct, n_pred + n_gold),
            "seed {seed}: entity F1 {}/{} vs {}/{}",
            f1.numerator,
            f1.denominator,
            2 * correct,
            n_pred + n_gold
        );
        let acc = pos_accuracy(&pred, &gold).map_err(|e| e.to_string())?.value("accuracy");
        ensure!(acc == same as f64 / total as f64, "seed {seed}: accuracy {acc}");
        match las_uas(&pred, &gold) {
            Ok(report) => {
                let (l, u) = (report.get("las").unwrap(), report.get("uas").unwrap());
                ensure!(
                    (l.numerator, u.numerator, u.denominator) == (las, uas, scored),
                    "seed {seed}: LAS/UAS counts differ"
                );
            }
            Err(_) => ensure!(scored == 0, "seed {seed}: LAS/UAS failed with {scored} scored tokens"),
        }

        let mut r = rng(seed ^ 0xAE5);
        let mut hyp = Vec::new();
        let mut golds = Vec::new();
        let (mut a_n, mut s_n, mut hit_s, mut hit_p) = (0usize, 0usize, 0usize, 0usize);
        for _ in 0..r.gen_range(1..4) {
            let (src, tgt) = (r.gen_range(1..6), r.gen_range(1..6));
            let h: Vec<_> = random_alignment(&mut r, src, tgt).pairs().into_iter().collect();
            let sure: Vec<_> = random_alignment(&mut r, src, tgt).pairs().into_iter().collect();
            let mut g = Alignment::from_pairs(sure.iter().copied());
            let mut possible = sure.clone();
            for _ in 0..r.gen_range(0..3) {
                let link = (r.gen_range(0..src), r.gen_range(0..tgt));
                if !possible.contains(&link) {
                    possible.push(link);
                    g.insert(link.0, link.1, Strength::Possible);
                }
            }
            a_n += h.len();
            s_n += sure.len();
            hit_s += h.iter().filter(|l| sure.contains(l)).count();
            hit_p += h.iter().filter(|l| possible.contains(l)).count();
            hyp.push(Alignment::from_pairs(h));
            golds.push(g);
        }
        let score = score_corpus(&hyp, &golds, Averaging::Micro).map_err(|e| e.to_string())?;
        let expected = if a_n + s_n == 0 {
            0.0
        } else {
            1.0 - (hit_s + hit_p) as f64 / (a_n + s_n) as f64
        };
        ensure!(score.aer == expected, "seed {seed}: AER {} vs {expected}", score.aer);
    }

    // Hand-counted: 4 scored tokens, 3 correct heads, 2 with labels.
    let parsed = |rows: &[(&str, usize, &str)]| {
        let forms: Vec<String> = (0..rows.len()).map(|i| format!("w{i}")).collect();
        let mut s = AnnotatedSentence::from_forms("fixture", &forms);
        for (t, &(upos, head, deprel)) in s.tokens.iter_mut().zip(rows) {
            t.upos = Some(upos.to_string());
            t.head = Some(if head == 0 { Head::Root } else { Head::Token(head - 1) });
            t.deprel = Some(deprel.to_string());
        }
        s
    };
    let gold = parsed(&[
        ("NUM", 3, "nummod"),
        ("SYM", 1, "dep"),
        ("NOUN", 0, "root"),
        ("ADP", 5, "case"),
        ("NOUN", 3, "nmod"),
        ("PUNCT", 3, "punct"),
    ]);
    let pred = parsed(&[
        ("NUM", 3, "nummod"),
        ("NOUN", 3, "nmod"),
        ("NOUN", 0, "root"),
        ("ADP", 3, "case"),
        ("NOUN", 3, "obl"),
        ("NOUN", 5, "dep"),
    ]);
    let report = las_uas(&[pred], std::slice::from_ref(&gold)).map_err(|e| e.to_string())?;
    let (l, u) = (report.get("las").unwrap(), report.get("uas").unwrap());
    ensure!(
        (l.numerator, l.denominator, u.numerator, u.denominator) == (2, 4, 3, 4),
        "fixture LAS {}/{} UAS {}/{}",
        l.numerator,
        l.denominator,
        u.numerator,
        u.denominator
    );
    let only_punct = parsed(&[("PUNCT", 0, "root"), ("SYM", 1, "punct")]);
    ensure!(
        las_uas(std::slice::from_ref(&only_punct), std::slice::from_ref(&only_punct)).is_err(),
        "all-excluded fixture scored"
    );
    Ok("1000 corpora, PUNCT/SYM fixture".to_string())
}

// ---- end-to-end pipeline -------------------------------------------------

/// Parallel text over a shared lexicon with light reordering and
/// insertions, plus NER tags on the source side.
fn write_bitext(dir: &Path, pairs: usize) {
    let mut r = rng(99);
    let (mut src, mut tgt, mut bio) = (String::new(), String::new(), String::new());
    for _ in 0..pairs {
        let n = r.gen_range(4..14);
        let words: Vec<usize> = (0..n).map(|_| r.gen_range(0..300)).collect();
        let mut target: Vec<String> = words.iter().map(|w| format!("t{w}")).collect();
        if n > 2 && r.gen_bool(0.5) {
            let i = r.gen_range(0..n - 1);
            target.swap(i, i + 1);
        }
        if r.gen_bool(0.3) {
            target.insert(r.gen_range(0..target.len()), "tx".to_string());
        }
        let tags = repair_bio(&random_tags(&mut r, n)).unwrap();
        let source: Vec<String> = words.iter().map(|w| format!("s{w}")).collect();
        src.push_str(&source.join(" "));
        src.push('\n');
        tgt.push_str(&target.join(" "));
        tgt.push('\n');
        for (w, t) in source.iter().zip(&tags) {
            bio.push_str(&format!("{w}\t{t}\n"));
        }
        bio.push('\n');
    }
    fs::write(dir.join("src.txt"), src).unwrap();
    fs::write(dir.join("tgt.txt"), tgt).unwrap();
    fs::write(dir.join("src.bio"), bio).unwrap();
}

fn xlproj(dir: &Path, args: &str) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_xlproj"))
        .current_dir(dir)
        .arg("-q")
        .args(args.split_whitespace())
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "xlproj {args}: {}",
        String::from_utf8_lossy(&out.stderr).trim()
    );
    Ok(())
}

fn run_pipeline(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    write_bitext(dir, 1_000);
    xlproj(dir, "align-train --source src.txt --target tgt.txt --model model.json")?;
    xlproj(
        dir,
        "align --source src.txt --target tgt.txt --model model.json --output links.txt",
    )?;
    xlproj(
        dir,
        "project --task ner --source src.bio --target tgt.txt --alignments links.txt --output silver.bio --lang xx",
    )?;
    xlproj(
        dir,
        "mix --task ner --gold en=src.bio --silver xx=silver.bio --seed 7 --output-dir mixed",
    )?;
    let mut files = BTreeMap::new();
    for sub in [dir.to_path_buf(), dir.join("mixed")] {
        for entry in fs::read_dir(&sub).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_file() {
                let name = path.strip_prefix(dir).unwrap().display().to_string();
                files.insert(name, fs::read(&path).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(files)
}

fn blocks(bytes: &[u8]) -> Vec<String> {
    let mut out: Vec<String> = String::from_utf8_lossy(bytes)
        .split("\n\n")
        .map(|b| b.trim().to_string())
        .filter(|b| !b.is_empty())
        .collect();
    out.sort();
    out
}

fn pipeline_determinism() -> Outcome {
    let t = Instant::now();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_pipeline(a.path())?;
    let second = run_pipeline(b.path())?;
    let elapsed = t.elapsed() / 2;
    ensure!(
        first.keys().eq(second.keys()),
        "different output files: {:?} vs {:?}",
        first.keys().collect::<Vec<_>>(),
        second.keys().collect::<Vec<_>>()
    );
    for (name, bytes) in &first {
        ensure!(&second[name] == bytes, "{name} differs between runs");
    }

    let train = first
        .get("mixed/multilingual.train.bio")
        .ok_or("no mixed training file")?;
    let mut inputs = blocks(&first["src.bio"]);
    inputs.extend(blocks(&first["silver.bio"]));
    inputs.sort();
    let mixed = blocks(train);
    ensure!(
        mixed == inputs,
        "mixed set is not the multiset union of gold and silver"
    );

    let meta: serde_json::Value =
        serde_json::from_slice(&first["mixed/multilingual.meta.json"]).map_err(|e| e.to_string())?;
    let (gold, silver) = (&meta["gold_sentences"], &meta["silver_sentences"]);
    ensure!(gold == silver && gold == 1000, "gold:silver {gold}:{silver}");

    within(elapsed, 30)?;
    Ok(format!(
        "1000 pairs, {:.1}s per run, byte-identical",
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("alignment table F/AER consistency", alignment_table),
        ("EM log-likelihood monotonicity", em_monotonicity),
        ("dictionary corpus aligns with AER 0", dictionary_alignment),
        ("identity projection round trip", identity_projection),
        ("BIO repair validity and idempotence", bio_repair),
        ("span filter ratio and overlap", span_filter),
        ("projected tree validity", tree_validity),
        ("metric oracle equivalence", metric_oracles),
        ("pipeline determinism and speed", pipeline_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({detail}; {secs:.2}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name}: {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
