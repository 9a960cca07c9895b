//! Pipeline configuration file. Every key is optional; command-line flags
//! override whatever the file sets.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use xlproj::align::Heuristic;
use xlproj::project::ProjectionPolicy;
use xlproj::silver::{DevPolicy, MixMode};

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub task: Option<String>,
    pub seed: Option<u64>,
    pub mode: Option<MixMode>,
    pub dev_policy: Option<DevPolicy>,
    pub lang: Option<String>,
    pub workers: Option<usize>,
    pub aligner: AlignerConfig,
    pub projection: ProjectionPolicy,
    pub paths: Paths,
    pub mix: MixInputs,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignerConfig {
    pub iterations: Option<usize>,
    pub smoothing: Option<f64>,
    pub null_prob: Option<f64>,
    pub heuristic: Option<Heuristic>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub source: Option<PathBuf>,
    pub target: Option<PathBuf>,
    pub train_source: Option<PathBuf>,
    pub train_target: Option<PathBuf>,
    pub alignments: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub translations: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub predicted: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub provenance: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

/// `LANG=PATH` entries.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixInputs {
    pub gold: Vec<String>,
    pub silver: Vec<String>,
    pub gold_dev: Vec<String>,
    pub silver_dev: Vec<String>,
}

impl PipelineConfig {
    /// Loads a TOML config. Relative paths inside it are taken relative
    /// to the file's own directory.
    pub fn load(path: &Path) -> Result<PipelineConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config: PipelineConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.rebase(base);
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let p = &mut self.paths;
        for path in [
            &mut p.source,
            &mut p.target,
            &mut p.train_source,
            &mut p.train_target,
            &mut p.alignments,
            &mut p.model,
            &mut p.translations,
            &mut p.predictions,
            &mut p.predicted,
            &mut p.gold,
            &mut p.output,
            &mut p.provenance,
            &mut p.output_dir,
        ]
        .into_iter()
        .flatten()
        {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        let m = &mut self.mix;
        for entry in m
            .gold
            .iter_mut()
            .chain(&mut m.silver)
            .chain(&mut m.gold_dev)
            .chain(&mut m.silver_dev)
        {
            if let Some((lang, path)) = entry.split_once('=') {
                if Path::new(path).is_relative() {
                    *entry = format!("{lang}={}", base.join(path).display());
                }
            }
        }
    }
}
