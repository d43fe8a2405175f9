//! The `suiteval` command-line pipeline:
//!
//! ```text
//! validate → label → pairs → predict → evaluate → report
//! ```
//!
//! Each stage reads the previous stage's file, writes exactly one output
//! (atomically) plus a `.manifest.json` sidecar recording input hashes,
//! and `--strict` verifies the upstream manifest before trusting its file.
//! The presentation of pairs to an adapter is derived from `--seed` alone,
//! so `predict` and `evaluate` must be given the same seed.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use suiteval_core::baseline::{extract_features, rfe, tokenize, train_lm, train_pairwise, TrainConfig};
use suiteval_core::evaluation::{aggregate, score_predictions, AggregateConfig, SystemReport, TiePolicy};
use suiteval_core::report::{render_report, RenderedReport, ReportFormat};
use suiteval_core::{
    generate_pairs, merge_identical_outputs, pair_stats, presentation_order, ComparisonPair,
    LabelSet, QEPrediction, TestSuite,
};

use crate::adapters::{self, AdapterConfig, AdapterMode, Polarity, DEFAULT_TIMEOUT_SECS};
use crate::corpus::{compile_suite, load_outputs, load_overrides, load_suite, suite_hash, RegexDialect};
use crate::error::{HarnessError, HarnessResult};
use crate::labeling::{format_labels, label_all, read_labels};
use crate::manifest::{verify_manifest, write_manifest, AdapterInfo, RunManifest};
use crate::model_file::{save_model, ModelFile};
use crate::pairsio::{format_pairs, read_pairs};
use crate::predfile::{format_predictions, read_predictions};
use crate::util::atomic_write;

#[derive(Debug, Parser)]
#[command(name = "suiteval", version, about = "Test-suite evaluation of sentence-level MT quality estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a suite file: unique ids, non-empty sources, compiling rules.
    Validate(ValidateArgs),
    /// Apply suite rules to MT outputs, producing a label file.
    Label(LabelArgs),
    /// Deconstruct labeled outputs into pass/fail comparison pairs.
    Pairs(PairsArgs),
    /// Obtain QE predictions for every pair through an adapter.
    Predict(PredictArgs),
    /// Score prediction files against the pairs into an evaluation file.
    Evaluate(EvaluateArgs),
    /// Render an evaluation file as a per-category accuracy table.
    Report(ReportArgs),
    /// Train the built-in baseline comparator on a pair file.
    Train(TrainArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Suite file (.suite.tsv).
    #[arg(long)]
    pub suite: PathBuf,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub suite: PathBuf,
    /// MT output file (.hyp.tsv).
    #[arg(long)]
    pub hypotheses: PathBuf,
    /// Manual override file (.ovr.tsv); later rows win on the same key.
    #[arg(long)]
    pub overrides: Option<PathBuf>,
    /// Label file to write (.lab.tsv).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long)]
    pub hypotheses: PathBuf,
    /// Label file from the label stage.
    #[arg(long)]
    pub labels: PathBuf,
    /// Pair file to write (.pairs.tsv).
    #[arg(long)]
    pub out: PathBuf,
    /// Verify the label file's manifest before using it.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Pair file from the pairs stage.
    #[arg(long)]
    pub pairs: PathBuf,
    /// Adapter kind: internal, score-file or external.
    #[arg(long)]
    pub adapter: String,
    /// Score direction of the adapter's raw scores.
    #[arg(long, default_value = "higher-is-better")]
    pub polarity: String,
    /// Presentation seed; evaluate must use the same value.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Name for the system column in reports.
    #[arg(long, default_value = "system")]
    pub system_name: String,
    /// Model file for the internal adapter.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Score file (.scores.tsv) for the score-file adapter.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Command line for the external adapter; it receives the request and
    /// reply file paths as its final two arguments.
    #[arg(long)]
    pub command: Option<String>,
    /// External command time budget in seconds.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT_SECS)]
    pub timeout: u64,
    /// Prediction file to write (.pred.tsv).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Prediction files, one per QE system column.
    #[arg(long = "predictions", required = true)]
    pub predictions: Vec<PathBuf>,
    /// Must match the seed the predictions were made under.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "half_credit")]
    pub tie_policy: String,
    /// Categories with fewer samples than this are flagged.
    #[arg(long, default_value_t = 30)]
    pub low_sample_threshold: usize,
    /// Evaluation file to write (.eval.json).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evaluation file from the evaluate stage.
    #[arg(long)]
    pub evaluation: PathBuf,
    /// text, tsv, json or markdown.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Report file to write; tsv adds one sibling file per subtable.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Pair file supplying (passing, failing) training examples; the LM is
    /// trained on the passing sides.
    #[arg(long)]
    pub pairs: PathBuf,
    /// n-gram order of the language model.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Add-k smoothing constant.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub learning_rate: f64,
    /// Keep only this many features via recursive feature elimination.
    #[arg(long)]
    pub keep: Option<usize>,
    /// Model file to write (.model.json).
    #[arg(long)]
    pub out: PathBuf,
}

/// Thread cap for internal parallelism, from `SUITEVAL_THREADS`; defaults
/// to the machine's parallelism.
fn thread_cap() -> usize {
    match std::env::var("SUITEVAL_THREADS") {
        Ok(v) => v.parse().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn require_file(path: &Path) -> HarnessResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(HarnessError::MissingInput(path.into()))
    }
}

fn load_suite_checked(path: &Path) -> HarnessResult<TestSuite> {
    require_file(path)?;
    load_suite(path, RegexDialect::PerlSubset)
}

fn load_pairs_checked(path: &Path, strict: bool) -> HarnessResult<Vec<ComparisonPair>> {
    require_file(path)?;
    if strict {
        verify_manifest(path)?;
    }
    read_pairs(path)
}

fn parse_tie_policy(s: &str) -> HarnessResult<TiePolicy> {
    TiePolicy::parse(s)
        .ok_or_else(|| HarnessError::Config(format!("unknown tie policy {s:?}")))
}

/// Runs one parsed invocation. Status lines go to standard output; the
/// caller turns errors into exit codes.
pub fn run(cli: Cli) -> HarnessResult<()> {
    match cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Label(args) => cmd_label(args),
        Command::Pairs(args) => cmd_pairs(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Report(args) => cmd_report(args),
        Command::Train(args) => cmd_train(args),
    }
}

fn cmd_validate(args: ValidateArgs) -> HarnessResult<()> {
    let suite = load_suite_checked(&args.suite)?;
    println!("{} items, {} categories", suite.len(), suite.category_count());
    Ok(())
}

fn cmd_label(args: LabelArgs) -> HarnessResult<()> {
    let suite = load_suite_checked(&args.suite)?;
    require_file(&args.hypotheses)?;
    let compiled = compile_suite(&suite, RegexDialect::PerlSubset)?;
    let raw = load_outputs(&args.hypotheses)?;
    let merged = merge_identical_outputs(&raw);
    let mut labels = label_all(&compiled, &merged, &suite_hash(&suite), thread_cap())?;
    if let Some(path) = &args.overrides {
        require_file(path)?;
        let records = load_overrides(path)?;
        labels = suiteval_core::labeling::apply_overrides(&labels, &records)?;
    }

    atomic_write(&args.out, &format_labels(&labels))?;
    let mut manifest = RunManifest::new("label");
    manifest.record_input(&args.suite)?;
    manifest.record_input(&args.hypotheses)?;
    if let Some(path) = &args.overrides {
        manifest.record_input(path)?;
    }
    write_manifest(&args.out, &manifest)?;
    println!(
        "{} outputs labeled from {} rows ({} items)",
        labels.len(),
        raw.len(),
        suite.len()
    );
    Ok(())
}

fn cmd_pairs(args: PairsArgs) -> HarnessResult<()> {
    let suite = load_suite_checked(&args.suite)?;
    require_file(&args.hypotheses)?;
    require_file(&args.labels)?;
    if args.strict {
        verify_manifest(&args.labels)?;
    }
    let merged = merge_identical_outputs(&load_outputs(&args.hypotheses)?);
    let labels: LabelSet = read_labels(&args.labels, &suite_hash(&suite))?;
    let pairs = generate_pairs(&suite, &merged, &labels)?;
    let stats = pair_stats(&pairs);

    atomic_write(&args.out, &format_pairs(&pairs))?;
    let mut manifest = RunManifest::new("pairs");
    manifest.record_input(&args.suite)?;
    manifest.record_input(&args.hypotheses)?;
    manifest.record_input(&args.labels)?;
    write_manifest(&args.out, &manifest)?;
    println!(
        "{} pairs from {} sources",
        stats.pair_count, stats.source_count
    );
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> HarnessResult<()> {
    let mode = match args.adapter.as_str() {
        "internal" => AdapterMode::Internal,
        "score-file" => AdapterMode::ScoreFile,
        "external" => AdapterMode::ExternalCommand,
        other => {
            return Err(HarnessError::Config(format!(
                "unknown adapter {other:?}; expected internal, score-file or external"
            )))
        }
    };
    let polarity = Polarity::parse(&args.polarity)
        .ok_or_else(|| HarnessError::Config(format!("unknown polarity {:?}", args.polarity)))?;
    let pairs = load_pairs_checked(&args.pairs, args.strict)?;
    let presented = presentation_order(&pairs, args.seed);

    let config = AdapterConfig {
        mode,
        polarity,
        seed: args.seed,
        system_name: args.system_name.clone(),
        command: args.command.clone(),
        score_path: args.scores.clone(),
        model_path: args.model.clone(),
        timeout_secs: args.timeout,
    };
    let predictions = adapters::predict(&config, &presented)?;

    atomic_write(&args.out, &format_predictions(&predictions))?;
    let mut manifest = RunManifest::new("predict");
    manifest.record_input(&args.pairs)?;
    if let Some(path) = &args.scores {
        manifest.record_input(path)?;
    }
    if let Some(path) = &args.model {
        manifest.record_input(path)?;
    }
    manifest.seed = Some(args.seed);
    manifest.adapter = Some(AdapterInfo {
        mode: args.adapter.clone(),
        polarity: args.polarity.clone(),
        system_name: args.system_name.clone(),
        command: args.command.clone(),
    });
    write_manifest(&args.out, &manifest)?;
    println!("{} predictions by {}", predictions.len(), args.system_name);
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> HarnessResult<()> {
    let tie_policy = parse_tie_policy(&args.tie_policy)?;
    let pairs = load_pairs_checked(&args.pairs, args.strict)?;
    let presented = presentation_order(&pairs, args.seed);
    let config = AggregateConfig {
        low_sample_threshold: args.low_sample_threshold,
    };

    let mut reports: Vec<SystemReport> = Vec::with_capacity(args.predictions.len());
    for path in &args.predictions {
        require_file(path)?;
        if args.strict {
            verify_manifest(path)?;
        }
        let predictions: Vec<QEPrediction> = read_predictions(path)?;
        let system_name = predictions
            .first()
            .map(|p| p.system_name.clone())
            .unwrap_or_else(|| "system".to_string());
        let credits = score_predictions(&pairs, &presented, &predictions, tie_policy)?;
        reports.push(aggregate(system_name, tie_policy, &credits, &pairs, config)?);
    }

    let mut json = serde_json::to_string_pretty(&reports)?;
    json.push('\n');
    atomic_write(&args.out, &json)?;
    let mut manifest = RunManifest::new("evaluate");
    manifest.record_input(&args.pairs)?;
    for path in &args.predictions {
        manifest.record_input(path)?;
    }
    manifest.seed = Some(args.seed);
    manifest.tie_policy = Some(tie_policy.as_str().to_string());
    write_manifest(&args.out, &manifest)?;
    for report in &reports {
        println!(
            "{}: total {:.1}, weighed {:.1}",
            report.system_name, report.micro_total_percent, report.macro_weighed_percent
        );
    }
    Ok(())
}

/// Sibling path for a TSV subtable: `out.tsv` → `out.<slug>.tsv`.
fn subtable_path(out: &Path, slug: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let ext = out
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{slug}{ext}"))
}

fn cmd_report(args: ReportArgs) -> HarnessResult<()> {
    require_file(&args.evaluation)?;
    if args.strict {
        verify_manifest(&args.evaluation)?;
    }
    let format = ReportFormat::parse(&args.format)
        .ok_or_else(|| HarnessError::Config(format!("unknown format {:?}", args.format)))?;
    let text = std::fs::read_to_string(&args.evaluation)
        .map_err(crate::error::io_err(&args.evaluation))?;
    let reports: Vec<SystemReport> = serde_json::from_str(&text)?;
    let rendered: RenderedReport = render_report(&reports, format)?;

    atomic_write(&args.out, &rendered.main)?;
    for (slug, table) in &rendered.subtables {
        atomic_write(&subtable_path(&args.out, slug), table)?;
    }
    let mut manifest = RunManifest::new("report");
    manifest.record_input(&args.evaluation)?;
    write_manifest(&args.out, &manifest)?;
    println!(
        "report written for {} system(s), {} subtable file(s)",
        reports.len(),
        rendered.subtables.len()
    );
    Ok(())
}

fn cmd_train(args: TrainArgs) -> HarnessResult<()> {
    let pairs = load_pairs_checked(&args.pairs, false)?;
    let corpus: Vec<Vec<String>> = pairs.iter().map(|p| tokenize(&p.passing.text)).collect();
    let lm = train_lm(&corpus, args.order, args.k)?;
    let examples: Vec<_> = pairs
        .iter()
        .map(|p| {
            (
                extract_features(&p.source_text, &p.passing.text, &lm),
                extract_features(&p.source_text, &p.failing.text, &lm),
            )
        })
        .collect();
    let config = TrainConfig {
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        seed: 0,
    };
    let model = match args.keep {
        Some(keep) => rfe(&examples, keep, config)?.1,
        None => train_pairwise(&examples, config)?,
    };
    let accuracy = model.training_accuracy(&examples)?;

    save_model(&args.out, &ModelFile::new(lm, model))?;
    let mut manifest = RunManifest::new("train");
    manifest.record_input(&args.pairs)?;
    write_manifest(&args.out, &manifest)?;
    println!(
        "trained on {} pairs, training accuracy {:.1}%",
        examples.len(),
        100.0 * accuracy
    );
    Ok(())
}
