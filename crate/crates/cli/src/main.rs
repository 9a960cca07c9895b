mod commands;
mod config;
mod error;
mod files;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tracing_subscriber::EnvFilter;

use crate::config::PipelineConfig;
use crate::error::CliError;

/// Word alignment, annotation projection and silver corpus assembly.
#[derive(Debug, Parser)]
#[command(name = "xlproj", version)]
struct Cli {
    /// TOML pipeline config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Only log errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train forward and backward lexicon models on a bitext.
    AlignTrain(AlignTrainArgs),
    /// Word-align a bitext and write Pharaoh links.
    Align(AlignArgs),
    /// Project source annotations onto target sentences.
    Project(ProjectArgs),
    /// Attach externally predicted labels to translations.
    Selftrain(SelftrainArgs),
    /// Score predictions or alignments against gold data.
    Eval(EvalArgs),
    /// Combine gold and silver corpora into shuffled training sets.
    Mix(MixArgs),
    /// Count sentences, tokens and annotations.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AlignerFlags {
    /// EM iterations.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Additive smoothing of expected counts.
    #[arg(long)]
    pub smoothing: Option<f64>,
    /// Fixed probability mass for the NULL word.
    #[arg(long)]
    pub null_prob: Option<f64>,
    /// intersection, union or grow-diag-final-and.
    #[arg(long)]
    pub heuristic: Option<String>,
}

#[derive(Debug, Args)]
pub struct AlignTrainArgs {
    /// Source side, one tokenized sentence per line.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Target side, line-parallel to the source.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Where to write the model.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub aligner: AlignerFlags,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Trained model to align with.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Train a fresh model on the training bitext with the input bitext
    /// appended, instead of loading one.
    #[arg(long)]
    pub from_scratch: bool,
    #[arg(long)]
    pub train_source: Option<PathBuf>,
    #[arg(long)]
    pub train_target: Option<PathBuf>,
    /// Pharaoh output, one line per sentence pair.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub aligner: AlignerFlags,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// pos, ner, parse or events.
    #[arg(long)]
    pub task: Option<String>,
    /// Annotated source corpus (CoNLL-U, BIO or event JSONL by task).
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Target sentences, one tokenized sentence per line.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Pharaoh alignments, one line per pair.
    #[arg(long)]
    pub alignments: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Provenance JSONL (default: OUTPUT.provenance.jsonl).
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    /// Target language code.
    #[arg(long)]
    pub lang: Option<String>,
    /// Drop projected spans longer than this many times the source span.
    #[arg(long)]
    pub ratio_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SelftrainArgs {
    #[arg(long)]
    pub task: Option<String>,
    /// Translated sentences, one tokenized sentence per line.
    #[arg(long)]
    pub translations: Option<PathBuf>,
    /// Model predictions in the task's format, one per translation.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[arg(long)]
    pub lang: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// align, pos, ner or parse.
    #[arg(long)]
    pub task: Option<String>,
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Report file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// text, tsv or json.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// micro or macro (alignment only).
    #[arg(long, default_value = "micro")]
    pub averaging: String,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[arg(long)]
    pub task: Option<String>,
    /// Gold training corpus as LANG=PATH (repeatable).
    #[arg(long)]
    pub gold: Vec<String>,
    /// Silver training corpus as LANG=PATH (repeatable).
    #[arg(long)]
    pub silver: Vec<String>,
    #[arg(long)]
    pub gold_dev: Vec<String>,
    #[arg(long)]
    pub silver_dev: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// multilingual or bilingual.
    #[arg(long)]
    pub mode: Option<String>,
    /// source-only or source-plus-silver.
    #[arg(long)]
    pub dev_policy: Option<String>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub task: Option<String>,
    /// Corpus as LANG=PATH (repeatable). A PATH.provenance.jsonl sidecar,
    /// if present, supplies label sources; otherwise the corpus counts as gold.
    #[arg(long = "corpus")]
    pub corpora: Vec<String>,
    /// Table file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn init_logging(verbose: u8, quiet: bool) {
    let level = match (quiet, verbose) {
        (true, _) => "error",
        (false, 0) => "info",
        (false, 1) => "debug",
        _ => "trace",
    };
    let filter = EnvFilter::try_from_env("XLPROJ_LOG").unwrap_or_else(|_| EnvFilter::new(level));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .without_time()
        .with_target(false)
        .with_ansi(std::io::stderr().is_terminal())
        .init();
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(n) = cli.workers.or(config.workers) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::AlignTrain(args) => commands::align_train(&args, &config),
        Command::Align(args) => commands::align(&args, &config),
        Command::Project(args) => commands::project(&args, &config),
        Command::Selftrain(args) => commands::selftrain(&args, &config),
        Command::Eval(args) => commands::eval(&args, &config),
        Command::Mix(args) => commands::mix(&args, &config),
        Command::Stats(args) => commands::stats(&args, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_logging(cli.verbose, cli.quiet);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
