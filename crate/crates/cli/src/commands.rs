use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tracing::info;
use xlproj::align::{
    emit_pharaoh, read_pharaoh, score_corpus, Averaging, BidirectionalModel, Heuristic, Strength, TrainConfig,
};
use xlproj::corpus::{read_plain, AnnotatedSentence, Bitext};
use xlproj::eval::{entity_f1, las_uas, pos_accuracy, MetricReport};
use xlproj::project::ProjectionPolicy;
use xlproj::silver::{
    assemble_projection, assemble_self_training, corpus_stats, mix as mix_corpora, DevPolicy, LangCorpus, MixMode,
    MixSpec, Provenance, SilverCorpus, Task,
};

use crate::config::PipelineConfig;
use crate::error::CliError;
use crate::files::{corpus_extension, read_corpus, read_text, read_with, render_corpus, require_inputs, Outputs};
use crate::{AlignArgs, AlignTrainArgs, AlignerFlags, EvalArgs, MixArgs, ProjectArgs, SelftrainArgs, StatsArgs};

const UNDETERMINED_LANG: &str = "und";

fn required<T: Clone>(flag: &Option<T>, config: &Option<T>, name: &str) -> Result<T, CliError> {
    flag.clone()
        .or_else(|| config.clone())
        .ok_or_else(|| CliError::Config(format!("missing --{name} (or its config entry)")))
}

fn parse<T: FromStr<Err = xlproj::Error>>(value: &str) -> Result<T, CliError> {
    value.parse().map_err(CliError::Core)
}

fn task(flag: &Option<String>, config: &PipelineConfig) -> Result<Task, CliError> {
    parse(&required(flag, &config.task, "task")?)
}

/// `OUTPUT.provenance.jsonl` next to a corpus file.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name: OsString = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".provenance.jsonl");
    path.with_file_name(name)
}

fn train_config(flags: &AlignerFlags, config: &PipelineConfig) -> TrainConfig {
    let defaults = TrainConfig::default();
    TrainConfig {
        iterations: flags
            .iterations
            .or(config.aligner.iterations)
            .unwrap_or(defaults.iterations),
        smoothing: flags
            .smoothing
            .or(config.aligner.smoothing)
            .unwrap_or(defaults.smoothing),
        null_prob: flags.null_prob.or(config.aligner.null_prob).or(defaults.null_prob),
    }
}

fn heuristic(flags: &AlignerFlags, config: &PipelineConfig) -> Result<Heuristic, CliError> {
    match &flags.heuristic {
        Some(h) => parse(h),
        None => Ok(config.aligner.heuristic.unwrap_or(Heuristic::GrowDiagFinalAnd)),
    }
}

fn read_bitext_files(
    source: &Path,
    target: &Path,
) -> Result<(Vec<AnnotatedSentence>, Vec<AnnotatedSentence>), CliError> {
    Ok((read_with(source, read_plain)?, read_with(target, read_plain)?))
}

fn zip(sources: Vec<AnnotatedSentence>, targets: Vec<AnnotatedSentence>, target: &Path) -> Result<Bitext, CliError> {
    Bitext::zip(sources, targets).map_err(|e| CliError::data(target, e))
}

fn log_training(model: &BidirectionalModel) {
    for (direction, m) in [("forward", &model.forward), ("backward", &model.backward)] {
        if let Some(ll) = m.log_likelihood().last() {
            info!(
                direction,
                iterations = m.iterations(),
                log_likelihood = ll,
                "trained lexicon model"
            );
        }
    }
}

pub fn align_train(args: &AlignTrainArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let source = required(&args.source, &config.paths.source, "source")?;
    let target = required(&args.target, &config.paths.target, "target")?;
    let model_path = required(&args.model, &config.paths.model, "model")?;
    let train = train_config(&args.aligner, config);
    require_inputs([source.as_path(), target.as_path()])?;

    let (s, t) = read_bitext_files(&source, &target)?;
    let bitext = zip(s, t, &target)?;
    info!(pairs = bitext.len(), empty = bitext.empty_lines, "read bitext");
    let model = BidirectionalModel::train(&bitext, &train)?;
    log_training(&model);

    let mut out = Outputs::default();
    out.add(model_path, model.to_json());
    out.commit()
}

pub fn align(args: &AlignArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let source = required(&args.source, &config.paths.source, "source")?;
    let target = required(&args.target, &config.paths.target, "target")?;
    let output = required(&args.output, &config.paths.output, "output")?;
    let heuristic = heuristic(&args.aligner, config)?;
    let model_path = args.model.clone().or_else(|| config.paths.model.clone());
    let train_source = args.train_source.clone().or_else(|| config.paths.train_source.clone());
    let train_target = args.train_target.clone().or_else(|| config.paths.train_target.clone());

    let mut inputs = vec![source.clone(), target.clone()];
    if args.from_scratch {
        if args.model.is_some() {
            return Err(CliError::Config(
                "--from-scratch and --model are mutually exclusive".into(),
            ));
        }
        match (&train_source, &train_target) {
            (Some(s), Some(t)) => inputs.extend([s.clone(), t.clone()]),
            (None, None) => {}
            _ => return Err(CliError::Config("--train-source and --train-target go together".into())),
        }
    } else {
        match &model_path {
            Some(m) => inputs.push(m.clone()),
            None => return Err(CliError::Config("missing --model (or pass --from-scratch)".into())),
        }
    }
    require_inputs(inputs.iter().map(PathBuf::as_path))?;

    let (s, t) = read_bitext_files(&source, &target)?;
    let model = if args.from_scratch {
        let (mut all_s, mut all_t) = match (&train_source, &train_target) {
            (Some(ts), Some(tt)) => read_bitext_files(ts, tt)?,
            _ => (Vec::new(), Vec::new()),
        };
        if all_s.len() != all_t.len() {
            return Err(CliError::data(
                train_target.as_deref().unwrap_or(Path::new("")),
                xlproj::Error::CountMismatch {
                    what: "training target lines".into(),
                    expected: all_s.len(),
                    found: all_t.len(),
                },
            ));
        }
        let training_pairs = all_s.len();
        all_s.extend(s.iter().cloned());
        all_t.extend(t.iter().cloned());
        let combined = zip(all_s, all_t, &target)?;
        info!(
            training_pairs,
            appended = combined.len() - training_pairs,
            "training from scratch"
        );
        let model = BidirectionalModel::train(&combined, &train_config(&args.aligner, config))?;
        log_training(&model);
        model
    } else {
        let path = model_path.expect("checked above");
        BidirectionalModel::from_json(&read_text(&path)?).map_err(|e| CliError::data(&path, e))?
    };

    let bitext = zip(s, t, &target)?;
    let alignments = model.align(&bitext, heuristic)?;
    let links: usize = alignments.iter().map(|a| a.len()).sum();
    info!(pairs = bitext.len(), links, %heuristic, "aligned");

    let mut text = String::new();
    for a in &alignments {
        text.push_str(&emit_pharaoh(a));
        text.push('\n');
    }
    let mut out = Outputs::default();
    out.add(output, text);
    out.commit()
}

fn log_report(corpus: &SilverCorpus) {
    let r = corpus.report();
    info!(
        sentences = corpus.len(),
        spans = r.source_spans,
        projected = r.projected,
        dropped_unaligned = r.dropped_unaligned,
        dropped_ratio = r.dropped_ratio,
        dropped_collision = r.dropped_collision,
        dropped_orphaned = r.dropped_orphaned,
        unaligned_tokens = r.unaligned_tokens,
        repaired_tags = r.repaired_tags,
        "assembled silver corpus"
    );
}

fn write_silver(task: Task, corpus: &SilverCorpus, output: PathBuf, provenance: PathBuf) -> Result<(), CliError> {
    let data = render_corpus(task, &corpus.sentences)?;
    let mut out = Outputs::default();
    out.add(output, data);
    out.add(provenance, corpus.provenance_jsonl());
    out.commit()
}

pub fn project(args: &ProjectArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let task = task(&args.task, config)?;
    let source = required(&args.source, &config.paths.source, "source")?;
    let target = required(&args.target, &config.paths.target, "target")?;
    let alignments_path = required(&args.alignments, &config.paths.alignments, "alignments")?;
    let output = required(&args.output, &config.paths.output, "output")?;
    let provenance = args
        .provenance
        .clone()
        .or_else(|| config.paths.provenance.clone())
        .unwrap_or_else(|| sidecar(&output));
    let lang = args
        .lang
        .clone()
        .or_else(|| config.lang.clone())
        .unwrap_or(UNDETERMINED_LANG.into());
    let policy = ProjectionPolicy {
        ratio_limit: args.ratio_limit.unwrap_or(config.projection.ratio_limit),
        ..config.projection.clone()
    };
    policy.check()?;
    require_inputs([source.as_path(), target.as_path(), alignments_path.as_path()])?;

    let sources = read_corpus(task, &source)?;
    let targets = read_with(&target, read_plain)?;
    let bitext = zip(sources, targets, &target)?;
    let alignments = read_with(&alignments_path, |r| read_pharaoh(r, Strength::Sure))?;
    let corpus = assemble_projection(&bitext, &alignments, task, &policy, &lang)?;
    log_report(&corpus);
    write_silver(task, &corpus, output, provenance)
}

pub fn selftrain(args: &SelftrainArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let task = task(&args.task, config)?;
    let translations = required(&args.translations, &config.paths.translations, "translations")?;
    let predictions = required(&args.predictions, &config.paths.predictions, "predictions")?;
    let output = required(&args.output, &config.paths.output, "output")?;
    let provenance = args
        .provenance
        .clone()
        .or_else(|| config.paths.provenance.clone())
        .unwrap_or_else(|| sidecar(&output));
    let lang = args
        .lang
        .clone()
        .or_else(|| config.lang.clone())
        .unwrap_or(UNDETERMINED_LANG.into());
    require_inputs([translations.as_path(), predictions.as_path()])?;

    let sentences = read_with(&translations, read_plain)?;
    let predicted = read_corpus(task, &predictions)?;
    let corpus = assemble_self_training(&sentences, &predicted, task, &lang)?;
    log_report(&corpus);
    write_silver(task, &corpus, output, provenance)
}

fn print_or_write(output: Option<PathBuf>, text: String) -> Result<(), CliError> {
    match output {
        Some(path) => {
            let mut out = Outputs::default();
            out.add(path, text);
            out.commit()
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn eval(args: &EvalArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let task = required(&args.task, &config.task, "task")?;
    let predicted = required(&args.predicted, &config.paths.predicted, "predicted")?;
    let gold = required(&args.gold, &config.paths.gold, "gold")?;
    let output = args.output.clone().or_else(|| config.paths.output.clone());
    let averaging: Averaging = parse(&args.averaging)?;
    if !["text", "tsv", "json"].contains(&args.format.as_str()) {
        return Err(CliError::Config(format!("unknown report format {:?}", args.format)));
    }
    let task: Option<Task> = if task == "align" { None } else { Some(parse(&task)?) };
    if task == Some(Task::Events) {
        return Err(CliError::Config("events have no built-in metric".into()));
    }
    require_inputs([predicted.as_path(), gold.as_path()])?;

    let report = match task {
        None => {
            let hyp = read_with(&predicted, |r| read_pharaoh(r, Strength::Sure))?;
            let reference = read_with(&gold, |r| read_pharaoh(r, Strength::Sure))?;
            MetricReport::alignment(&score_corpus(&hyp, &reference, averaging)?)
        }
        Some(task) => {
            let p = read_corpus(task, &predicted)?;
            let g = read_corpus(task, &gold)?;
            match task {
                Task::Pos => pos_accuracy(&p, &g)?,
                Task::Ner => entity_f1(&p, &g)?,
                Task::Parse => las_uas(&p, &g)?,
                Task::Events => unreachable!("rejected above"),
            }
        }
    };
    for s in &report.scores {
        info!(metric = %s.name, value = format!("{:.1}", s.percent()), numerator = s.numerator, denominator = s.denominator);
    }
    let text = match args.format.as_str() {
        "tsv" => format!("{}\n", report.to_tsv()),
        "json" => format!("{}\n", report.to_json()),
        _ => report.to_string(),
    };
    print_or_write(output, text)
}

fn lang_path(entry: &str) -> Result<(String, PathBuf), CliError> {
    match entry.split_once('=') {
        Some((lang, path)) if !lang.is_empty() && !path.is_empty() => Ok((lang.to_string(), PathBuf::from(path))),
        _ => Err(CliError::Config(format!("expected LANG=PATH, got {entry:?}"))),
    }
}

fn lang_paths(flag: &[String], config: &[String]) -> Result<Vec<(String, PathBuf)>, CliError> {
    let entries = if flag.is_empty() { config } else { flag };
    entries.iter().map(|e| lang_path(e)).collect()
}

fn read_lang_corpora(task: Task, entries: &[(String, PathBuf)]) -> Result<Vec<LangCorpus>, CliError> {
    entries
        .iter()
        .map(|(lang, path)| Ok(LangCorpus::new(lang.clone(), read_corpus(task, path)?)))
        .collect()
}

pub fn mix(args: &MixArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let task = task(&args.task, config)?;
    let output_dir = required(&args.output_dir, &config.paths.output_dir, "output-dir")?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let mode = match &args.mode {
        Some(m) => parse::<MixMode>(m)?,
        None => config.mode.unwrap_or_default(),
    };
    let dev_policy = match &args.dev_policy {
        Some(d) => parse::<DevPolicy>(d)?,
        None => config.dev_policy.unwrap_or_default(),
    };
    let gold = lang_paths(&args.gold, &config.mix.gold)?;
    let silver = lang_paths(&args.silver, &config.mix.silver)?;
    let gold_dev = lang_paths(&args.gold_dev, &config.mix.gold_dev)?;
    let silver_dev = lang_paths(&args.silver_dev, &config.mix.silver_dev)?;
    if gold.is_empty() {
        return Err(CliError::Config("missing --gold LANG=PATH".into()));
    }
    require_inputs(
        gold.iter()
            .chain(&silver)
            .chain(&gold_dev)
            .chain(&silver_dev)
            .map(|(_, p)| p.as_path()),
    )?;

    let spec = MixSpec {
        gold: read_lang_corpora(task, &gold)?,
        silver: read_lang_corpora(task, &silver)?,
        gold_dev: read_lang_corpora(task, &gold_dev)?,
        silver_dev: read_lang_corpora(task, &silver_dev)?,
        seed,
        dev_policy,
        mode,
    };
    let sets = mix_corpora(&spec)?;
    let ext = corpus_extension(task);
    let mut out = Outputs::default();
    for set in &sets {
        info!(
            set = %set.name,
            train = set.train.len(),
            gold = set.metadata.gold_sentences,
            silver = set.metadata.silver_sentences,
            dev = set.dev.len(),
            "mixed"
        );
        out.add(
            output_dir.join(format!("{}.train.{ext}", set.name)),
            render_corpus(task, &set.train)?,
        );
        out.add(
            output_dir.join(format!("{}.dev.{ext}", set.name)),
            render_corpus(task, &set.dev)?,
        );
        let meta = serde_json::to_string_pretty(&set.metadata).expect("metadata serializes");
        out.add(output_dir.join(format!("{}.meta.json", set.name)), format!("{meta}\n"));
    }
    out.commit()
}

fn read_provenance(path: &Path) -> Result<Vec<Provenance>, CliError> {
    read_text(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| {
                CliError::data(
                    path,
                    xlproj::Error::Parse {
                        line: i + 1,
                        message: e.to_string(),
                    },
                )
            })
        })
        .collect()
}

pub fn stats(args: &StatsArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let task = task(&args.task, config)?;
    let entries: Vec<(String, PathBuf)> = args.corpora.iter().map(|e| lang_path(e)).collect::<Result<_, _>>()?;
    require_inputs(entries.iter().map(|(_, p)| p.as_path()))?;

    let mut corpora = Vec::with_capacity(entries.len());
    for (lang, path) in &entries {
        let sentences = read_corpus(task, path)?;
        let side = sidecar(path);
        let corpus = if side.is_file() {
            let provenance = read_provenance(&side)?;
            if provenance.len() != sentences.len() {
                return Err(CliError::data(
                    &side,
                    xlproj::Error::CountMismatch {
                        what: "provenance records".into(),
                        expected: sentences.len(),
                        found: provenance.len(),
                    },
                ));
            }
            SilverCorpus {
                lang: lang.clone(),
                sentences,
                provenance,
            }
        } else {
            SilverCorpus::gold(lang.clone(), sentences)
        };
        corpora.push(corpus);
    }
    let refs: Vec<&SilverCorpus> = corpora.iter().collect();
    print_or_write(args.output.clone(), corpus_stats(&refs).to_string())
}
