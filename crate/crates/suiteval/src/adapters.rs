//! Obtaining comparison predictions for presented pairs.
//!
//! Three adapter modes:
//!
//! * `internal` — the built-in comparator from a trained model file;
//! * `score-file` — a `.scores.tsv` (`pair_id  side  score`, side A/B)
//!   produced by any external scorer;
//! * `external` — a batch command invoked with two arguments, an input
//!   `.qein.tsv` (`pair_id  source  candidate_a  candidate_b`) and an
//!   output path it must fill with either `pair_id  answer` rows
//!   (A/B/TIE) or `pair_id  score_a  score_b` rows. One file must stick
//!   to one shape.
//!
//! Scores are normalized here: with `lower-is-better` polarity (HTER-like
//! systems) raw scores are negated, so every stored prediction reads
//! higher-is-better. Ties are exact equality of normalized scores; what a
//! tie is worth is the evaluation's concern.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use suiteval_core::baseline::extract_features;
use suiteval_core::{PresentedPair, QEPrediction};

use crate::error::{io_err, HarnessError, HarnessResult};
use crate::model_file::load_model;
use crate::tsvio::{format_tsv, read_tsv};

pub const QE_INPUT_HEADER: [&str; 4] = ["pair_id", "source", "candidate_a", "candidate_b"];
pub const SCORES_HEADER: [&str; 3] = ["pair_id", "side", "score"];

pub const DEFAULT_TIMEOUT_SECS: u64 = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdapterMode {
    Internal,
    ScoreFile,
    ExternalCommand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    #[default]
    HigherIsBetter,
    LowerIsBetter,
}

impl Polarity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "higher-is-better" | "higher_is_better" => Some(Polarity::HigherIsBetter),
            "lower-is-better" | "lower_is_better" => Some(Polarity::LowerIsBetter),
            _ => None,
        }
    }

    pub fn normalize(&self, score: f64) -> f64 {
        match self {
            Polarity::HigherIsBetter => score,
            Polarity::LowerIsBetter => -score,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdapterConfig {
    pub mode: AdapterMode,
    pub polarity: Polarity,
    pub seed: u64,
    pub system_name: String,
    pub command: Option<String>,
    pub score_path: Option<PathBuf>,
    pub model_path: Option<PathBuf>,
    pub timeout_secs: u64,
}

impl AdapterConfig {
    pub fn validate(&self) -> HarnessResult<()> {
        let require = |present: bool, what: &str, mode: &str| {
            if present {
                Ok(())
            } else {
                Err(HarnessError::Config(format!("{what} is required for {mode} mode")))
            }
        };
        match self.mode {
            AdapterMode::Internal => require(self.model_path.is_some(), "--model", "internal"),
            AdapterMode::ScoreFile => require(self.score_path.is_some(), "--scores", "score-file"),
            AdapterMode::ExternalCommand => {
                require(self.command.is_some(), "--command", "external")
            }
        }
    }
}

/// Runs the configured adapter over the presented pairs. Predictions come
/// back sorted by pair_id, one per pair.
pub fn predict(
    config: &AdapterConfig,
    presented: &[PresentedPair],
) -> HarnessResult<Vec<QEPrediction>> {
    config.validate()?;
    let mut predictions = match config.mode {
        AdapterMode::Internal => predict_internal(config, presented)?,
        AdapterMode::ScoreFile => predict_from_scores(config, presented)?,
        AdapterMode::ExternalCommand => predict_external(config, presented)?,
    };
    predictions.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
    Ok(predictions)
}

/// Built-in comparator: each side is scored by the linear model over its
/// feature vector, higher is better by construction, so the configured
/// polarity does not apply.
fn predict_internal(
    config: &AdapterConfig,
    presented: &[PresentedPair],
) -> HarnessResult<Vec<QEPrediction>> {
    let model = load_model(config.model_path.as_ref().expect("validated"))?;
    presented
        .iter()
        .map(|p| {
            let feat_a = extract_features(&p.source_text, &p.text_a, &model.lm);
            let feat_b = extract_features(&p.source_text, &p.text_b, &model.lm);
            let score_a = model.model.side_score(&feat_a)?;
            let score_b = model.model.side_score(&feat_b)?;
            Ok(QEPrediction::from_scores(
                p.pair_id.clone(),
                config.system_name.clone(),
                score_a,
                score_b,
            ))
        })
        .collect()
}

fn predict_from_scores(
    config: &AdapterConfig,
    presented: &[PresentedPair],
) -> HarnessResult<Vec<QEPrediction>> {
    let path = config.score_path.as_ref().expect("validated");
    let rows = read_tsv(path, &SCORES_HEADER)?;
    let mut scores: BTreeMap<(String, char), f64> = BTreeMap::new();
    for row in rows {
        let f = row.fields;
        let side = match f[1].as_str() {
            "A" => 'A',
            "B" => 'B',
            other => {
                return Err(HarnessError::Parse {
                    path: path.into(),
                    line: row.line,
                    message: format!("side must be A or B, got {other:?}"),
                })
            }
        };
        let score: f64 = f[2].parse().map_err(|_| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: format!("bad score {:?}", f[2]),
        })?;
        if scores.insert((f[0].clone(), side), score).is_some() {
            return Err(HarnessError::DuplicateScore {
                pair_id: f[0].clone(),
                side,
            });
        }
    }

    presented
        .iter()
        .map(|p| {
            let lookup = |side: char| {
                scores
                    .get(&(p.pair_id.clone(), side))
                    .copied()
                    .ok_or_else(|| HarnessError::MissingScore {
                        pair_id: p.pair_id.clone(),
                        side,
                    })
            };
            let a = config.polarity.normalize(lookup('A')?);
            let b = config.polarity.normalize(lookup('B')?);
            Ok(QEPrediction::from_scores(
                p.pair_id.clone(),
                config.system_name.clone(),
                a,
                b,
            ))
        })
        .collect()
}

fn predict_external(
    config: &AdapterConfig,
    presented: &[PresentedPair],
) -> HarnessResult<Vec<QEPrediction>> {
    let command = config.command.as_ref().expect("validated");
    let dir = tempfile::tempdir().map_err(io_err("adapter-tempdir"))?;
    let input_path = dir.path().join("batch.qein.tsv");
    let output_path = dir.path().join("batch.qeout.tsv");

    let rows: Vec<Vec<String>> = presented
        .iter()
        .map(|p| {
            vec![
                p.pair_id.clone(),
                p.source_text.clone(),
                p.text_a.clone(),
                p.text_b.clone(),
            ]
        })
        .collect();
    fs::write(&input_path, format_tsv(&QE_INPUT_HEADER, &rows)).map_err(io_err(&input_path))?;

    run_with_timeout(command, &input_path, &output_path, config.timeout_secs)?;
    let answers = parse_qe_output(command, &output_path, config)?;

    // Exactly one answer per presented pair.
    let mut predictions = Vec::with_capacity(presented.len());
    let presented_ids: BTreeMap<&str, ()> =
        presented.iter().map(|p| (p.pair_id.as_str(), ())).collect();
    for id in answers.keys() {
        if !presented_ids.contains_key(id.as_str()) {
            return Err(suiteval_core::CoreError::UnknownPair(id.clone()).into());
        }
    }
    for p in presented {
        let pred = answers
            .get(&p.pair_id)
            .ok_or_else(|| HarnessError::MissingAnswer(p.pair_id.clone()))?;
        predictions.push(pred.clone());
    }
    Ok(predictions)
}

fn run_with_timeout(
    command: &str,
    input: &std::path::Path,
    output: &std::path::Path,
    timeout_secs: u64,
) -> HarnessResult<()> {
    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| {
        HarnessError::Config("external command is empty".into())
    })?;
    let mut child = Command::new(program)
        .args(parts)
        .arg(input)
        .arg(output)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| HarnessError::External {
            command: command.to_string(),
            message: format!("failed to start: {e}"),
        })?;

    let deadline = Instant::now() + Duration::from_secs(timeout_secs);
    loop {
        match child.try_wait() {
            Ok(Some(status)) => {
                if status.success() {
                    return Ok(());
                }
                let mut message = format!("exit status {status}");
                if let Some(mut err) = child.stderr.take() {
                    let mut buf = String::new();
                    use std::io::Read;
                    let _ = err.read_to_string(&mut buf);
                    if !buf.trim().is_empty() {
                        message.push_str(": ");
                        message.push_str(buf.trim());
                    }
                }
                return Err(HarnessError::External {
                    command: command.to_string(),
                    message,
                });
            }
            Ok(None) => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(HarnessError::Timeout {
                        command: command.to_string(),
                        seconds: timeout_secs,
                    });
                }
                std::thread::sleep(Duration::from_millis(20));
            }
            Err(e) => {
                return Err(HarnessError::External {
                    command: command.to_string(),
                    message: format!("wait failed: {e}"),
                })
            }
        }
    }
}

fn parse_qe_output(
    command: &str,
    path: &std::path::Path,
    config: &AdapterConfig,
) -> HarnessResult<BTreeMap<String, QEPrediction>> {
    let content = fs::read_to_string(path).map_err(|_| HarnessError::External {
        command: command.to_string(),
        message: format!("command produced no output file at {}", path.display()),
    })?;
    let mut lines = content.lines();
    let header = lines.next().unwrap_or("");
    let choice_shape = match header {
        "pair_id\tanswer" => true,
        "pair_id\tscore_a\tscore_b" => false,
        other => {
            return Err(HarnessError::External {
                command: command.to_string(),
                message: format!("malformed reply header {other:?}"),
            })
        }
    };

    let mut answers = BTreeMap::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let expected = if choice_shape { 2 } else { 3 };
        if fields.len() != expected {
            // A row shaped like the other answer format means the reply
            // mixes shapes; anything else is plain malformed output.
            if fields.len() == 2 || fields.len() == 3 {
                return Err(HarnessError::MixedAnswerShapes);
            }
            return Err(HarnessError::External {
                command: command.to_string(),
                message: format!("malformed reply at line {}", idx + 2),
            });
        }
        let pair_id = fields[0].to_string();
        let prediction = if choice_shape {
            let choice = match fields[1] {
                "A" => suiteval_core::Choice::First,
                "B" => suiteval_core::Choice::Second,
                "TIE" => suiteval_core::Choice::Tie,
                other => {
                    return Err(HarnessError::External {
                        command: command.to_string(),
                        message: format!("answer must be A, B or TIE, got {other:?}"),
                    })
                }
            };
            QEPrediction::from_choice(pair_id.clone(), config.system_name.clone(), choice)
        } else {
            let parse = |s: &str| -> HarnessResult<f64> {
                s.parse().map_err(|_| HarnessError::External {
                    command: command.to_string(),
                    message: format!("bad score {s:?} at line {}", idx + 2),
                })
            };
            let a = config.polarity.normalize(parse(fields[1])?);
            let b = config.polarity.normalize(parse(fields[2])?);
            QEPrediction::from_scores(pair_id.clone(), config.system_name.clone(), a, b)
        };
        if answers.insert(pair_id.clone(), prediction).is_some() {
            return Err(suiteval_core::CoreError::DuplicatePrediction(pair_id).into());
        }
    }
    Ok(answers)
}
