//! The `.pred.tsv` format: one prediction per pair, header `pair_id
//! system  choice  score_a  score_b`. Scores are polarity-normalized
//! (higher is better); both score columns are empty for choice-only
//! adapters.

use std::path::Path;

use suiteval_core::{Choice, QEPrediction};

use crate::error::{HarnessError, HarnessResult};
use crate::tsvio::{format_tsv, read_tsv};

pub const PREDICTIONS_HEADER: [&str; 5] = ["pair_id", "system", "choice", "score_a", "score_b"];

fn format_score(score: Option<f64>) -> String {
    // `{}` on f64 prints the shortest string that round-trips exactly.
    score.map(|s| format!("{s}")).unwrap_or_default()
}

pub fn format_predictions(predictions: &[QEPrediction]) -> String {
    let rows: Vec<Vec<String>> = predictions
        .iter()
        .map(|p| {
            vec![
                p.pair_id.clone(),
                p.system_name.clone(),
                p.choice.as_str().to_string(),
                format_score(p.score_first),
                format_score(p.score_second),
            ]
        })
        .collect();
    format_tsv(&PREDICTIONS_HEADER, &rows)
}

pub fn read_predictions(path: &Path) -> HarnessResult<Vec<QEPrediction>> {
    let rows = read_tsv(path, &PREDICTIONS_HEADER)?;
    let mut predictions = Vec::with_capacity(rows.len());
    for row in rows {
        let f = row.fields;
        let choice = Choice::parse(&f[2]).ok_or_else(|| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: format!("unknown choice {:?}", f[2]),
        })?;
        let parse_score = |field: &str| -> HarnessResult<Option<f64>> {
            if field.is_empty() {
                return Ok(None);
            }
            field.parse::<f64>().map(Some).map_err(|_| HarnessError::Parse {
                path: path.into(),
                line: row.line,
                message: format!("bad score {field:?}"),
            })
        };
        let score_first = parse_score(&f[3])?;
        let score_second = parse_score(&f[4])?;
        if score_first.is_some() != score_second.is_some() {
            return Err(HarnessError::Parse {
                path: path.into(),
                line: row.line,
                message: "scores must be present for both sides or neither".into(),
            });
        }
        predictions.push(QEPrediction {
            pair_id: f[0].clone(),
            choice,
            score_first,
            score_second,
            system_name: f[1].clone(),
        });
    }
    Ok(predictions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn scores_round_trip_exactly() {
        let preds = vec![
            QEPrediction::from_scores("p1", "sys", 0.1 + 0.2, -1.5e-7),
            QEPrediction::from_choice("p2", "sys", Choice::Tie),
        ];
        let text = format_predictions(&preds);
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let back = read_predictions(f.path()).unwrap();
        assert_eq!(back, preds);
    }
}
