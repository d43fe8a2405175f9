use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};

/// Outcome of applying an item's rules to one translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Negative rule present, neither rule matched: the output proves
    /// nothing about the targeted phenomenon.
    Unknown,
    /// Both rules matched: the rules need repair.
    Conflict,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
            Verdict::Conflict => "conflict",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(Verdict::Pass),
            "fail" => Some(Verdict::Fail),
            "unknown" => Some(Verdict::Unknown),
            "conflict" => Some(Verdict::Conflict),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Automatic,
    Manual,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Automatic => "automatic",
            Origin::Manual => "manual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "automatic" => Some(Origin::Automatic),
            "manual" => Some(Origin::Manual),
            _ => None,
        }
    }
}

/// The five-way decision table over the two rule-match booleans.
///
/// `negative` is `None` when the item declares no negative rule, otherwise
/// `Some(matched)`. With a positive match alone the output passes; a lone
/// negative match fails it; both matching is a rule conflict; neither
/// matching is `Unknown` when a negative rule exists and `Fail` when the
/// positive rule alone carries the decision.
pub fn decide_verdict(positive_matched: bool, negative: Option<bool>) -> Verdict {
    match (positive_matched, negative) {
        (true, Some(true)) => Verdict::Conflict,
        (true, _) => Verdict::Pass,
        (false, Some(true)) => Verdict::Fail,
        (false, Some(false)) => Verdict::Unknown,
        (false, None) => Verdict::Fail,
    }
}

/// A pass/fail verdict attached to one merged output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub item_id: String,
    pub output_text: String,
    pub verdict: Verdict,
    pub origin: Origin,
}

/// Labels for a whole output collection, sorted by (item_id, text) with
/// unique keys, tagged with the identity of the suite that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<Label>,
    suite_ref: String,
}

impl LabelSet {
    pub fn new(mut labels: Vec<Label>, suite_ref: impl Into<String>) -> CoreResult<Self> {
        labels.sort_by(|a, b| {
            (a.item_id.as_str(), a.output_text.as_str())
                .cmp(&(b.item_id.as_str(), b.output_text.as_str()))
        });
        for pair in labels.windows(2) {
            if pair[0].item_id == pair[1].item_id && pair[0].output_text == pair[1].output_text {
                return Err(CoreError::DuplicateLabelKey {
                    item_id: pair[0].item_id.clone(),
                    text: pair[0].output_text.clone(),
                });
            }
        }
        Ok(Self {
            labels,
            suite_ref: suite_ref.into(),
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn suite_ref(&self) -> &str {
        &self.suite_ref
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, item_id: &str, text: &str) -> Option<&Label> {
        self.labels
            .binary_search_by(|l| {
                (l.item_id.as_str(), l.output_text.as_str()).cmp(&(item_id, text))
            })
            .ok()
            .map(|i| &self.labels[i])
    }
}

/// Manual verdicts are binary: a human controller never records a conflict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverrideVerdict {
    Pass,
    Fail,
}

impl From<OverrideVerdict> for Verdict {
    fn from(v: OverrideVerdict) -> Verdict {
        match v {
            OverrideVerdict::Pass => Verdict::Pass,
            OverrideVerdict::Fail => Verdict::Fail,
        }
    }
}

/// One manual correction of an automatic label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverrideRecord {
    pub item_id: String,
    pub output_text: String,
    pub verdict: OverrideVerdict,
    pub annotator: String,
}

/// Applies manual overrides on top of automatic labels. Later records for
/// the same (item, text) key win; a record whose key matches no label is an
/// error listing every dangling key.
pub fn apply_overrides(labels: &LabelSet, overrides: &[OverrideRecord]) -> CoreResult<LabelSet> {
    let mut dangling: Vec<(String, String)> = Vec::new();
    let mut winning: BTreeMap<(&str, &str), OverrideVerdict> = BTreeMap::new();
    let mut seen_dangling: BTreeSet<(&str, &str)> = BTreeSet::new();
    for rec in overrides {
        let key = (rec.item_id.as_str(), rec.output_text.as_str());
        if labels.get(key.0, key.1).is_some() {
            winning.insert(key, rec.verdict);
        } else if seen_dangling.insert(key) {
            dangling.push((rec.item_id.clone(), rec.output_text.clone()));
        }
    }
    if !dangling.is_empty() {
        return Err(CoreError::DanglingOverrides(dangling));
    }
    let updated = labels
        .labels()
        .iter()
        .map(|l| {
            match winning.get(&(l.item_id.as_str(), l.output_text.as_str())) {
                Some(&v) => Label {
                    item_id: l.item_id.clone(),
                    output_text: l.output_text.clone(),
                    verdict: v.into(),
                    origin: Origin::Manual,
                },
                None => l.clone(),
            }
        })
        .collect();
    LabelSet::new(updated, labels.suite_ref())
}
