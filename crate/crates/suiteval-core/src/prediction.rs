use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

/// A QE system's answer for one presented pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    First,
    Second,
    Tie,
}

impl Choice {
    pub fn flipped(self) -> Choice {
        match self {
            Choice::First => Choice::Second,
            Choice::Second => Choice::First,
            Choice::Tie => Choice::Tie,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Choice::First => "first",
            Choice::Second => "second",
            Choice::Tie => "tie",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "first" => Some(Choice::First),
            "second" => Some(Choice::Second),
            "tie" => Some(Choice::Tie),
            _ => None,
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One prediction, with polarity-normalized scores when the adapter is
/// score-based (higher is better after normalization) and bare choices for
/// choice-only systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QEPrediction {
    pub pair_id: String,
    pub choice: Choice,
    pub score_first: Option<f64>,
    pub score_second: Option<f64>,
    pub system_name: String,
}

impl QEPrediction {
    /// Builds a prediction from two normalized scores; exact equality is a
    /// tie.
    pub fn from_scores(
        pair_id: impl Into<String>,
        system_name: impl Into<String>,
        score_first: f64,
        score_second: f64,
    ) -> Self {
        let choice = if score_first > score_second {
            Choice::First
        } else if score_first < score_second {
            Choice::Second
        } else {
            Choice::Tie
        };
        Self {
            pair_id: pair_id.into(),
            choice,
            score_first: Some(score_first),
            score_second: Some(score_second),
            system_name: system_name.into(),
        }
    }

    pub fn from_choice(
        pair_id: impl Into<String>,
        system_name: impl Into<String>,
        choice: Choice,
    ) -> Self {
        Self {
            pair_id: pair_id.into(),
            choice,
            score_first: None,
            score_second: None,
            system_name: system_name.into(),
        }
    }
}
