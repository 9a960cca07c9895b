use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedSentence;
use crate::error::{Error, Result};

/// Generator behind every shuffle, recorded in the output metadata.
/// Changing it changes training set order for a given seed.
pub const SHUFFLE_RNG: &str = "rand_chacha-0.3/ChaCha8Rng/seed_from_u64+rand-0.8/SliceRandom::shuffle";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LangCorpus {
    pub lang: String,
    pub sentences: Vec<AnnotatedSentence>,
}

impl LangCorpus {
    pub fn new(lang: impl Into<String>, sentences: Vec<AnnotatedSentence>) -> Self {
        LangCorpus {
            lang: lang.into(),
            sentences,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DevPolicy {
    #[default]
    SourceOnly,
    SourcePlusSilver,
}

impl FromStr for DevPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source-only" => Ok(DevPolicy::SourceOnly),
            "source-plus-silver" => Ok(DevPolicy::SourcePlusSilver),
            other => Err(Error::InvalidArgument(format!("unknown dev policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixMode {
    /// One joint set: all gold plus all silver.
    #[default]
    Multilingual,
    /// One set per silver language: all gold plus that language's silver.
    Bilingual,
}

impl FromStr for MixMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multilingual" => Ok(MixMode::Multilingual),
            "bilingual" => Ok(MixMode::Bilingual),
            other => Err(Error::InvalidArgument(format!("unknown mix mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MixSpec {
    pub gold: Vec<LangCorpus>,
    pub silver: Vec<LangCorpus>,
    pub gold_dev: Vec<LangCorpus>,
    pub silver_dev: Vec<LangCorpus>,
    pub seed: u64,
    pub dev_policy: DevPolicy,
    pub mode: MixMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixMetadata {
    pub name: String,
    pub rng: String,
    pub seed: u64,
    pub mode: MixMode,
    pub dev_policy: DevPolicy,
    pub gold_sentences: usize,
    pub silver_sentences: usize,
    pub dev_sentences: usize,
    /// Languages contributing to the training set, gold first.
    pub languages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedSet {
    /// `multilingual`, or the silver language in bilingual mode.
    pub name: String,
    pub train: Vec<AnnotatedSentence>,
    pub dev: Vec<AnnotatedSentence>,
    pub metadata: MixMetadata,
}

fn languages<'a>(corpora: impl IntoIterator<Item = &'a LangCorpus>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in corpora {
        if !out.contains(&c.lang) {
            out.push(c.lang.clone());
        }
    }
    out
}

fn concat<'a>(corpora: impl IntoIterator<Item = &'a LangCorpus>) -> Vec<AnnotatedSentence> {
    corpora.into_iter().flat_map(|c| c.sentences.iter().cloned()).collect()
}

/// Concatenates gold and silver training data and shuffles it with the
/// seeded generator. Dev sets are concatenated, not shuffled.
pub fn mix(spec: &MixSpec) -> Result<Vec<MixedSet>> {
    if spec.gold.iter().all(|c| c.sentences.is_empty()) {
        return Err(Error::InvalidArgument("no gold training sentences to mix".into()));
    }
    let groups: Vec<(String, Vec<&LangCorpus>)> = match spec.mode {
        MixMode::Multilingual => vec![("multilingual".to_string(), spec.silver.iter().collect())],
        MixMode::Bilingual => {
            let langs = languages(&spec.silver);
            if langs.is_empty() {
                return Err(Error::InvalidArgument(
                    "bilingual mixing needs at least one silver corpus".into(),
                ));
            }
            langs
                .into_iter()
                .map(|lang| {
                    let members = spec.silver.iter().filter(|c| c.lang == lang).collect();
                    (lang, members)
                })
                .collect()
        }
    };

    let gold = concat(&spec.gold);
    let gold_dev = concat(&spec.gold_dev);
    let mut sets = Vec::with_capacity(groups.len());
    for (name, silver) in groups {
        let silver_train = concat(silver.iter().copied());
        let mut train = gold.clone();
        train.extend(silver_train.iter().cloned());
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        train.shuffle(&mut rng);

        let mut dev = gold_dev.clone();
        if spec.dev_policy == DevPolicy::SourcePlusSilver {
            let langs = languages(silver.iter().copied());
            dev.extend(concat(spec.silver_dev.iter().filter(|c| match spec.mode {
                MixMode::Multilingual => true,
                MixMode::Bilingual => langs.contains(&c.lang),
            })));
        }

        let metadata = MixMetadata {
            name: name.clone(),
            rng: SHUFFLE_RNG.to_string(),
            seed: spec.seed,
            mode: spec.mode,
            dev_policy: spec.dev_policy,
            gold_sentences: gold.len(),
            silver_sentences: silver_train.len(),
            dev_sentences: dev.len(),
            languages: languages(spec.gold.iter().chain(silver.iter().copied())),
        };
        sets.push(MixedSet {
            name,
            train,
            dev,
            metadata,
        });
    }
    Ok(sets)
}
