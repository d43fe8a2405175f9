use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::category::CategoryPath;
use crate::error::{CoreError, CoreResult};
use crate::pairing::ComparisonPair;
use crate::prediction::{Choice, QEPrediction};
use crate::present::PresentedPair;

/// How a tie answer converts into credit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A tie earns 0.5, so an indifferent system scores chance level.
    HalfCredit,
    /// A tie earns nothing.
    Incorrect,
}

impl TiePolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            TiePolicy::HalfCredit => "half_credit",
            TiePolicy::Incorrect => "incorrect",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "half_credit" => Some(TiePolicy::HalfCredit),
            "incorrect" => Some(TiePolicy::Incorrect),
            _ => None,
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Accuracy of one table row (a top-level category or a subcategory).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryResult {
    pub category: CategoryPath,
    pub sample_count: usize,
    pub correct_credit: f64,
    pub accuracy_percent: f64,
    pub low_sample: bool,
}

/// One QE system's full evaluation: top-level category rows, subcategory
/// tables grouped under their parent category, and the micro ("Total") and
/// macro ("weighed") aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub system_name: String,
    pub tie_policy: TiePolicy,
    pub low_sample_threshold: usize,
    pub categories: Vec<CategoryResult>,
    pub subtables: BTreeMap<String, Vec<CategoryResult>>,
    pub micro_total_percent: f64,
    pub macro_weighed_percent: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AggregateConfig {
    pub low_sample_threshold: usize,
}

impl Default for AggregateConfig {
    fn default() -> Self {
        Self {
            low_sample_threshold: 30,
        }
    }
}

/// Per-pair credit for one system's predictions.
///
/// Credit is 1.0 when the predicted side maps through the presentation to
/// the passing translation, 0.0 when it maps to the failing one, and the
/// tie policy's value for a tie. Credits come back in pair order.
pub fn score_predictions(
    pairs: &[ComparisonPair],
    presented: &[PresentedPair],
    predictions: &[QEPrediction],
    tie_policy: TiePolicy,
) -> CoreResult<Vec<f64>> {
    let mut by_id: BTreeMap<&str, &QEPrediction> = BTreeMap::new();
    for pred in predictions {
        if by_id.insert(pred.pair_id.as_str(), pred).is_some() {
            return Err(CoreError::DuplicatePrediction(pred.pair_id.clone()));
        }
    }
    let mut presentation: BTreeMap<&str, bool> = BTreeMap::new();
    for p in presented {
        presentation.insert(p.pair_id.as_str(), p.a_is_passing);
    }
    for pred in predictions {
        if !presentation.contains_key(pred.pair_id.as_str()) {
            return Err(CoreError::UnknownPair(pred.pair_id.clone()));
        }
    }

    let mut credits = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let pred = by_id
            .get(pair.pair_id.as_str())
            .ok_or_else(|| CoreError::MissingPrediction(pair.pair_id.clone()))?;
        let a_is_passing = *presentation
            .get(pair.pair_id.as_str())
            .ok_or_else(|| CoreError::MissingPrediction(pair.pair_id.clone()))?;
        let credit = match pred.choice {
            Choice::Tie => match tie_policy {
                TiePolicy::HalfCredit => 0.5,
                TiePolicy::Incorrect => 0.0,
            },
            Choice::First => {
                if a_is_passing {
                    1.0
                } else {
                    0.0
                }
            }
            Choice::Second => {
                if a_is_passing {
                    0.0
                } else {
                    1.0
                }
            }
        };
        credits.push(credit);
    }
    Ok(credits)
}

/// A pre-summed table row, for aggregating from counts rather than per-pair
/// credits.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryTally {
    pub category: CategoryPath,
    pub sample_count: usize,
    pub correct_credit: f64,
}

fn result_from_tally(tally: &CategoryTally, threshold: usize) -> CategoryResult {
    let accuracy_percent = if tally.sample_count > 0 {
        100.0 * tally.correct_credit / tally.sample_count as f64
    } else {
        0.0
    };
    CategoryResult {
        category: tally.category.clone(),
        sample_count: tally.sample_count,
        correct_credit: tally.correct_credit,
        accuracy_percent,
        low_sample: tally.sample_count < threshold,
    }
}

/// Builds a report body from top-level tallies alone (no subtables). The
/// micro total weighs every sample equally; the macro "weighed" average
/// gives each category equal importance.
pub fn aggregate_tallies(
    system_name: impl Into<String>,
    tie_policy: TiePolicy,
    tallies: &[CategoryTally],
    config: AggregateConfig,
) -> CoreResult<SystemReport> {
    let total_samples: usize = tallies.iter().map(|t| t.sample_count).sum();
    if tallies.is_empty() || total_samples == 0 {
        return Err(CoreError::NothingToEvaluate);
    }
    let categories: Vec<CategoryResult> = tallies
        .iter()
        .map(|t| result_from_tally(t, config.low_sample_threshold))
        .collect();
    let total_credit: f64 = tallies.iter().map(|t| t.correct_credit).sum();
    let micro_total_percent = 100.0 * total_credit / total_samples as f64;
    let macro_weighed_percent =
        categories.iter().map(|c| c.accuracy_percent).sum::<f64>() / categories.len() as f64;
    Ok(SystemReport {
        system_name: system_name.into(),
        tie_policy,
        low_sample_threshold: config.low_sample_threshold,
        categories,
        subtables: BTreeMap::new(),
        micro_total_percent,
        macro_weighed_percent,
    })
}

/// Groups per-pair credits into the report body: top-level category rows,
/// plus one subtable per parent category that carries subcategories.
/// Percentages stay at full precision here; rounding happens at render
/// time.
pub fn aggregate(
    system_name: impl Into<String>,
    tie_policy: TiePolicy,
    credits: &[f64],
    pairs: &[ComparisonPair],
    config: AggregateConfig,
) -> CoreResult<SystemReport> {
    if pairs.is_empty() {
        return Err(CoreError::NothingToEvaluate);
    }
    debug_assert_eq!(credits.len(), pairs.len());

    let mut top: BTreeMap<CategoryPath, (usize, f64)> = BTreeMap::new();
    let mut sub: BTreeMap<String, BTreeMap<CategoryPath, (usize, f64)>> = BTreeMap::new();
    for (pair, &credit) in pairs.iter().zip(credits) {
        let entry = top.entry(pair.category.top_level()).or_default();
        entry.0 += 1;
        entry.1 += credit;
        if pair.category.subcategory().is_some() {
            let entry = sub
                .entry(pair.category.category().into())
                .or_default()
                .entry(pair.category.clone())
                .or_default();
            entry.0 += 1;
            entry.1 += credit;
        }
    }

    let tallies: Vec<CategoryTally> = top
        .into_iter()
        .map(|(category, (sample_count, correct_credit))| CategoryTally {
            category,
            sample_count,
            correct_credit,
        })
        .collect();
    let mut report = aggregate_tallies(system_name, tie_policy, &tallies, config)?;
    report.subtables = sub
        .into_iter()
        .map(|(parent, rows)| {
            let rows = rows
                .into_iter()
                .map(|(category, (sample_count, correct_credit))| {
                    result_from_tally(
                        &CategoryTally {
                            category,
                            sample_count,
                            correct_credit,
                        },
                        config.low_sample_threshold,
                    )
                })
                .collect();
            (parent, rows)
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::{MTOutput, SystemType};
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec;

    fn pair(id: &str, category: CategoryPath) -> ComparisonPair {
        let out = |text: &str| MTOutput {
            item_id: "i".to_string(),
            text: text.to_string(),
            systems: BTreeSet::from(["S".to_string()]),
            system_type: SystemType::Neural,
        };
        ComparisonPair {
            pair_id: id.to_string(),
            item_id: "i".to_string(),
            source_text: "src".to_string(),
            passing: out("good"),
            failing: out("bad"),
            category,
        }
    }

    fn presented(pairs: &[ComparisonPair], a_is_passing: bool) -> Vec<PresentedPair> {
        pairs
            .iter()
            .map(|p| PresentedPair {
                pair_id: p.pair_id.clone(),
                source_text: p.source_text.clone(),
                text_a: if a_is_passing {
                    p.passing.text.clone()
                } else {
                    p.failing.text.clone()
                },
                text_b: if a_is_passing {
                    p.failing.text.clone()
                } else {
                    p.passing.text.clone()
                },
                a_is_passing,
            })
            .collect()
    }

    #[test]
    fn credit_follows_presentation() {
        let cat = CategoryPath::top("Ambiguity").unwrap();
        let pairs = vec![pair("p0", cat.clone())];
        let pred = vec![QEPrediction::from_choice("p0", "sys", Choice::First)];
        let pass_first = presented(&pairs, true);
        let credits =
            score_predictions(&pairs, &pass_first, &pred, TiePolicy::HalfCredit).unwrap();
        assert_eq!(credits, vec![1.0]);
        let pass_second = presented(&pairs, false);
        let credits =
            score_predictions(&pairs, &pass_second, &pred, TiePolicy::HalfCredit).unwrap();
        assert_eq!(credits, vec![0.0]);
    }

    #[test]
    fn tie_policies() {
        let cat = CategoryPath::top("Ambiguity").unwrap();
        let pairs = vec![pair("p0", cat)];
        let pres = presented(&pairs, true);
        let pred = vec![QEPrediction::from_choice("p0", "sys", Choice::Tie)];
        assert_eq!(
            score_predictions(&pairs, &pres, &pred, TiePolicy::HalfCredit).unwrap(),
            vec![0.5]
        );
        assert_eq!(
            score_predictions(&pairs, &pres, &pred, TiePolicy::Incorrect).unwrap(),
            vec![0.0]
        );
    }

    #[test]
    fn missing_and_duplicate_predictions() {
        let cat = CategoryPath::top("Ambiguity").unwrap();
        let pairs = vec![pair("p0", cat)];
        let pres = presented(&pairs, true);
        let err = score_predictions(&pairs, &pres, &[], TiePolicy::HalfCredit).unwrap_err();
        assert_eq!(err, CoreError::MissingPrediction("p0".to_string()));
        let dup = vec![
            QEPrediction::from_choice("p0", "sys", Choice::First),
            QEPrediction::from_choice("p0", "sys", Choice::Second),
        ];
        let err = score_predictions(&pairs, &pres, &dup, TiePolicy::HalfCredit).unwrap_err();
        assert_eq!(err, CoreError::DuplicatePrediction("p0".to_string()));
    }

    #[test]
    fn single_group_micro_equals_macro() {
        let cat = CategoryPath::top("Ambiguity").unwrap();
        let pairs: Vec<ComparisonPair> =
            (0..10).map(|i| pair(&alloc::format!("p{i}"), cat.clone())).collect();
        let credits = vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0];
        let report = aggregate(
            "sys",
            TiePolicy::HalfCredit,
            &credits,
            &pairs,
            AggregateConfig::default(),
        )
        .unwrap();
        assert_eq!(report.micro_total_percent, 80.0);
        assert_eq!(report.macro_weighed_percent, 80.0);
    }

    #[test]
    fn micro_macro_diverge_on_uneven_groups() {
        let a = CategoryPath::top("A").unwrap();
        let b = CategoryPath::top("B").unwrap();
        let pairs = vec![
            pair("p0", a),
            pair("p1", b.clone()),
            pair("p2", b.clone()),
            pair("p3", b),
        ];
        let credits = vec![1.0, 0.0, 0.0, 0.0];
        let report = aggregate(
            "sys",
            TiePolicy::HalfCredit,
            &credits,
            &pairs,
            AggregateConfig::default(),
        )
        .unwrap();
        assert_eq!(report.micro_total_percent, 25.0);
        assert_eq!(report.macro_weighed_percent, 50.0);
    }

    #[test]
    fn subcategories_group_under_parent() {
        let verb = |sub: &str| CategoryPath::with_sub("Verb", sub).unwrap();
        let pairs = vec![
            pair("p0", verb("present")),
            pair("p1", verb("present")),
            pair("p2", verb("perfect")),
            pair("p3", CategoryPath::top("Negation").unwrap()),
        ];
        let credits = vec![1.0, 0.0, 1.0, 1.0];
        let report = aggregate(
            "sys",
            TiePolicy::HalfCredit,
            &credits,
            &pairs,
            AggregateConfig::default(),
        )
        .unwrap();
        assert_eq!(report.categories.len(), 2);
        let verb_rows = &report.subtables["Verb"];
        assert_eq!(verb_rows.len(), 2);
        assert_eq!(verb_rows[0].category.subcategory(), Some("perfect"));
        assert_eq!(verb_rows[1].accuracy_percent, 50.0);
        // Subtables never feed the totals.
        assert_eq!(
            report.categories.iter().map(|c| c.sample_count).sum::<usize>(),
            4
        );
    }

    #[test]
    fn empty_pairs_is_an_error() {
        let err = aggregate(
            "sys",
            TiePolicy::HalfCredit,
            &[],
            &[],
            AggregateConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, CoreError::NothingToEvaluate);
    }

    #[test]
    fn low_sample_flagging() {
        let tallies = vec![
            CategoryTally {
                category: CategoryPath::top("Negation").unwrap(),
                sample_count: 13,
                correct_credit: 5.0,
            },
            CategoryTally {
                category: CategoryPath::top("Punctuation").unwrap(),
                sample_count: 138,
                correct_credit: 16.0,
            },
        ];
        let report = aggregate_tallies(
            "sys",
            TiePolicy::HalfCredit,
            &tallies,
            AggregateConfig::default(),
        )
        .unwrap();
        assert!(report.categories[0].low_sample);
        assert!(!report.categories[1].low_sample);
    }
}
