//! IBM Model 1 trained with EM.
//!
//! The translation table `t(f | e)` is stored sparsely: each source row
//! keeps explicit probabilities for the target words it co-occurred with
//! in training, plus a `floor` probability shared by every other target
//! word. With zero smoothing the floor drops to zero after the first
//! M-step.
//!
//! Source position 0 of every sentence is a virtual NULL word. Its prior
//! share is `1 / (l + 1)` by default, or a fixed `null_prob` with the
//! remaining mass spread evenly over the `l` real words.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{symmetrize, Alignment, Heuristic, Strength};
use crate::corpus::Bitext;
use crate::error::{Error, Result};

/// Pairs per E-step work unit. Partial counts are merged in chunk order,
/// so results do not depend on the number of worker threads.
const CHUNK: usize = 128;

const FORMAT: &str = "xlproj-lexicon";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub iterations: usize,
    /// Additive smoothing applied to expected counts in the M-step.
    pub smoothing: f64,
    /// Fixed NULL prior; `None` gives NULL the same share as each word.
    pub null_prob: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 5,
            smoothing: 0.0,
            null_prob: None,
        }
    }
}

impl TrainConfig {
    fn check(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "smoothing must be a finite value >= 0, got {}",
                self.smoothing
            )));
        }
        if let Some(p) = self.null_prob {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("null_prob must be in [0, 1), got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Vocab {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    fn new() -> Self {
        Vocab {
            words: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), id);
        id
    }

    fn get(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    fn len(&self) -> usize {
        self.words.len()
    }

    fn reindex(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
    }
}

/// Trained translation table.
///
/// Source row 0 belongs to NULL; row `k + 1` to source vocabulary word `k`.
/// Serializes as a versioned JSON document with the vocabularies and one
/// sparse probability row per source word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ModelFile", try_from = "ModelFile")]
pub struct LexiconModel {
    source: Vocab,
    target: Vocab,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    probs: Vec<f64>,
    floors: Vec<f64>,
    null_prob: Option<f64>,
    smoothing: f64,
    iterations: usize,
    log_likelihood: Vec<f64>,
}

/// Corpus encoded as vocabulary ids.
struct Encoded {
    pairs: Vec<(Vec<u32>, Vec<u32>)>,
}

impl LexiconModel {
    /// Runs `config.iterations` rounds of EM over `bitext`.
    ///
    /// The returned model records the corpus log-likelihood after every
    /// M-step. With zero smoothing that trace never decreases.
    pub fn train(bitext: &Bitext, config: &TrainConfig) -> Result<Self> {
        config.check()?;
        if bitext.is_empty() {
            return Err(Error::InvalidArgument("cannot train on an empty bitext".into()));
        }

        let mut source = Vocab::new();
        let mut target = Vocab::new();
        let encoded = Encoded {
            pairs: bitext
                .pairs
                .iter()
                .map(|p| {
                    let e = p.source.tokens.iter().map(|t| source.intern(&t.form)).collect();
                    let f = p.target.tokens.iter().map(|t| target.intern(&t.form)).collect();
                    (e, f)
                })
                .collect(),
        };

        // Row 0 is NULL, which co-occurs with every target word.
        let rows = source.len() + 1;
        let mut cooc: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); rows];
        for (e, f) in &encoded.pairs {
            for &fw in f {
                cooc[0].insert(fw);
                for &ew in e {
                    cooc[ew as usize + 1].insert(fw);
                }
            }
        }
        let mut offsets = Vec::with_capacity(rows + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for row in &cooc {
            targets.extend(row.iter().copied());
            offsets.push(targets.len());
        }
        drop(cooc);

        let uniform = if target.len() == 0 {
            0.0
        } else {
            1.0 / target.len() as f64
        };
        let mut model = LexiconModel {
            source,
            target,
            probs: vec![uniform; targets.len()],
            floors: vec![uniform; rows],
            offsets,
            targets,
            null_prob: config.null_prob,
            smoothing: config.smoothing,
            iterations: 0,
            log_likelihood: Vec::with_capacity(config.iterations),
        };

        let (mut counts, _) = model.expected_counts(&encoded);
        for _ in 0..config.iterations {
            model.maximize(&counts);
            model.iterations += 1;
            let (next, ll) = model.expected_counts(&encoded);
            model.log_likelihood.push(ll);
            counts = next;
        }
        Ok(model)
    }

    /// E-step: expected link counts per table cell and the corpus
    /// log-likelihood under the current parameters.
    fn expected_counts(&self, corpus: &Encoded) -> (Vec<f64>, f64) {
        let partials: Vec<(HashMap<usize, f64>, f64)> = corpus
            .pairs
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut counts: HashMap<usize, f64> = HashMap::new();
                let mut ll = 0.0;
                let mut weights = Vec::new();
                let mut cells = Vec::new();
                for (e, f) in chunk {
                    let (null_prior, word_prior) = self.priors(e.len());
                    for &fw in f {
                        weights.clear();
                        cells.clear();
                        let rows = std::iter::once((0usize, null_prior))
                            .chain(e.iter().map(|&ew| (ew as usize + 1, word_prior)));
                        for (row, prior) in rows {
                            let cell = self.cell(row, fw).expect("training pair co-occurs");
                            weights.push(prior * self.probs[cell]);
                            cells.push(cell);
                        }
                        let z: f64 = weights.iter().sum();
                        if z <= 0.0 {
                            continue;
                        }
                        ll += z.ln();
                        for (&cell, &w) in cells.iter().zip(&weights) {
                            if w > 0.0 {
                                *counts.entry(cell).or_insert(0.0) += w / z;
                            }
                        }
                    }
                }
                (counts, ll)
            })
            .collect();

        let mut counts = vec![0.0; self.probs.len()];
        let mut ll = 0.0;
        for (partial, chunk_ll) in partials {
            // Each cell receives at most one addition per chunk, so the
            // HashMap's iteration order does not affect the sums.
            for (cell, c) in partial {
                counts[cell] += c;
            }
            ll += chunk_ll;
        }
        (counts, ll)
    }

    /// M-step: renormalize each row, with additive smoothing spread over
    /// the whole target vocabulary.
    fn maximize(&mut self, counts: &[f64]) {
        let vocab = self.target.len() as f64;
        for row in 0..self.floors.len() {
            let range = self.offsets[row]..self.offsets[row + 1];
            let total: f64 = counts[range.clone()].iter().sum();
            let denom = total + self.smoothing * vocab;
            if denom > 0.0 {
                for cell in range {
                    self.probs[cell] = (counts[cell] + self.smoothing) / denom;
                }
                self.floors[row] = self.smoothing / denom;
            } else {
                let uniform = if vocab > 0.0 { 1.0 / vocab } else { 0.0 };
                for cell in range {
                    self.probs[cell] = uniform;
                }
                self.floors[row] = uniform;
            }
        }
    }

    fn priors(&self, len: usize) -> (f64, f64) {
        match self.null_prob {
            None => {
                let p = 1.0 / (len + 1) as f64;
                (p, p)
            }
            Some(_) if len == 0 => (1.0, 0.0),
            Some(p0) => (p0, (1.0 - p0) / len as f64),
        }
    }

    fn cell(&self, row: usize, target: u32) -> Option<usize> {
        let lo = self.offsets[row];
        let hi = self.offsets[row + 1];
        self.targets[lo..hi].binary_search(&target).ok().map(|k| lo + k)
    }

    fn row_prob(&self, row: usize, target: u32) -> f64 {
        match self.cell(row, target) {
            Some(cell) => self.probs[cell],
            None => self.floors[row],
        }
    }

    /// `t(target | source)`; `None` as source means NULL. Unseen source
    /// words are uniform over the target vocabulary; unseen target words
    /// get probability zero.
    pub fn prob(&self, target: &str, source: Option<&str>) -> f64 {
        let Some(f) = self.target.get(target) else {
            return 0.0;
        };
        match source {
            None => self.row_prob(0, f),
            Some(word) => match self.source.get(word) {
                Some(e) => self.row_prob(e as usize + 1, f),
                None => 1.0 / self.target.len() as f64,
            },
        }
    }

    /// Sum of `t(f | source)` over the whole target vocabulary.
    pub fn row_sum(&self, source: Option<&str>) -> Option<f64> {
        let row = match source {
            None => 0,
            Some(w) => self.source.get(w)? as usize + 1,
        };
        let range = self.offsets[row]..self.offsets[row + 1];
        let explicit: f64 = self.probs[range.clone()].iter().sum();
        let implicit = (self.target.len() - range.len()) as f64 * self.floors[row];
        Some(explicit + implicit)
    }

    pub fn source_words(&self) -> impl Iterator<Item = &str> {
        self.source.words.iter().map(String::as_str)
    }

    pub fn target_words(&self) -> impl Iterator<Item = &str> {
        self.target.words.iter().map(String::as_str)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn null_prob(&self) -> Option<f64> {
        self.null_prob
    }

    /// Corpus log-likelihood after each M-step, up to the constant
    /// sentence-length term.
    pub fn log_likelihood(&self) -> &[f64] {
        &self.log_likelihood
    }

    /// Pharaoh-ready alignment of every pair, in pair order.
    pub fn align_corpus(&self, bitext: &Bitext) -> Vec<Alignment> {
        bitext
            .pairs
            .par_iter()
            .map(|p| viterbi_align(self, &p.source.forms(), &p.target.forms()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

/// A source-to-target and a target-to-source model trained on the same
/// bitext, as needed for symmetrized alignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidirectionalModel {
    pub forward: LexiconModel,
    pub backward: LexiconModel,
}

impl BidirectionalModel {
    pub fn train(bitext: &Bitext, config: &TrainConfig) -> Result<Self> {
        let (forward, backward) = rayon::join(
            || LexiconModel::train(bitext, config),
            || LexiconModel::train(&bitext.reversed(), config),
        );
        Ok(BidirectionalModel {
            forward: forward?,
            backward: backward?,
        })
    }

    /// Viterbi alignments in both directions, symmetrized per pair.
    pub fn align(&self, bitext: &Bitext, heuristic: Heuristic) -> Result<Vec<Alignment>> {
        bitext
            .pairs
            .par_iter()
            .map(|p| {
                let src = p.source.forms();
                let tgt = p.target.forms();
                let forward = viterbi_align(&self.forward, &src, &tgt);
                let backward = viterbi_align(&self.backward, &tgt, &src).transpose();
                symmetrize(&forward, &backward, heuristic)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

/// Most probable source position for each target token, with NULL
/// winners left unaligned.
///
/// Ties between real positions go to the lowest source index, and NULL
/// wins only with a strictly higher score than every real position. A
/// target word never seen in training scores the same everywhere and so
/// links to source position 0.
pub fn viterbi_align<S: AsRef<str>, T: AsRef<str>>(model: &LexiconModel, source: &[S], target: &[T]) -> Alignment {
    let mut alignment = Alignment::with_dims(source.len(), target.len());
    let (null_prior, word_prior) = model.priors(source.len());
    let source_ids: Vec<Option<u32>> = source.iter().map(|w| model.source.get(w.as_ref())).collect();
    let uniform = 1.0 / model.target.len().max(1) as f64;

    for (j, word) in target.iter().enumerate() {
        let Some(f) = model.target.get(word.as_ref()) else {
            if !source.is_empty() {
                alignment.insert(0, j, Strength::Sure);
            }
            continue;
        };
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in source_ids.iter().enumerate() {
            let t = match e {
                Some(e) => model.row_prob(*e as usize + 1, f),
                None => uniform,
            };
            let score = word_prior * t;
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        let null_score = null_prior * model.row_prob(0, f);
        if let Some((i, score)) = best {
            if score >= null_score {
                alignment.insert(i, j, Strength::Sure);
            }
        }
    }
    alignment
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    iterations: usize,
    smoothing: f64,
    null_prob: Option<f64>,
    log_likelihood: Vec<f64>,
    source_vocab: Vec<String>,
    target_vocab: Vec<String>,
    /// Row 0 is NULL, row `k + 1` is source word `k`.
    rows: Vec<RowRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowRecord {
    floor: f64,
    entries: Vec<(u32, f64)>,
}

impl From<LexiconModel> for ModelFile {
    fn from(m: LexiconModel) -> Self {
        ModelFile::from(&m)
    }
}

impl TryFrom<ModelFile> for LexiconModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        file.into_model()
    }
}

impl From<&LexiconModel> for ModelFile {
    fn from(m: &LexiconModel) -> Self {
        let rows = (0..m.floors.len())
            .map(|row| {
                let range = m.offsets[row]..m.offsets[row + 1];
                RowRecord {
                    floor: m.floors[row],
                    entries: m.targets[range.clone()]
                        .iter()
                        .copied()
                        .zip(m.probs[range].iter().copied())
                        .collect(),
                }
            })
            .collect();
        ModelFile {
            format: FORMAT.to_string(),
            version: VERSION,
            iterations: m.iterations,
            smoothing: m.smoothing,
            null_prob: m.null_prob,
            log_likelihood: m.log_likelihood.clone(),
            source_vocab: m.source.words.clone(),
            target_vocab: m.target.words.clone(),
            rows,
        }
    }
}

impl ModelFile {
    fn into_model(self) -> Result<LexiconModel> {
        let bad = |msg: String| Error::InvalidArgument(format!("lexicon model: {msg}"));
        if self.format != FORMAT || self.version != VERSION {
            return Err(bad(format!(
                "unsupported format {:?} version {}",
                self.format, self.version
            )));
        }
        if self.rows.len() != self.source_vocab.len() + 1 {
            return Err(bad(format!(
                "{} rows for {} source words plus NULL",
                self.rows.len(),
                self.source_vocab.len()
            )));
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        let mut probs = Vec::new();
        let mut floors = Vec::new();
        for (r, row) in self.rows.into_iter().enumerate() {
            let mut last = None;
            for (f, p) in row.entries {
                if f as usize >= self.target_vocab.len() || last.is_some_and(|l| l >= f) {
                    return Err(bad(format!("row {r} has unsorted or unknown target id {f}")));
                }
                last = Some(f);
                targets.push(f);
                probs.push(p);
            }
            offsets.push(targets.len());
            floors.push(row.floor);
        }
        let mut source = Vocab {
            words: self.source_vocab,
            index: HashMap::new(),
        };
        let mut target = Vocab {
            words: self.target_vocab,
            index: HashMap::new(),
        };
        source.reindex();
        target.reindex();
        Ok(LexiconModel {
            source,
            target,
            offsets,
            targets,
            probs,
            floors,
            null_prob: self.null_prob,
            smoothing: self.smoothing,
            iterations: self.iterations,
            log_likelihood: self.log_likelihood,
        })
    }
}
