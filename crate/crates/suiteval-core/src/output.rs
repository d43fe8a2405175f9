use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// Kind of MT engine that produced a translation. `Mixed` marks merged
/// outputs whose contributing systems disagree on type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemType {
    Neural,
    PhraseBased,
    RuleBased,
    Mixed,
    Unknown,
}

impl SystemType {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemType::Neural => "neural",
            SystemType::PhraseBased => "phrase_based",
            SystemType::RuleBased => "rule_based",
            SystemType::Mixed => "mixed",
            SystemType::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "neural" => Some(SystemType::Neural),
            "phrase_based" => Some(SystemType::PhraseBased),
            "rule_based" => Some(SystemType::RuleBased),
            "mixed" => Some(SystemType::Mixed),
            "unknown" => Some(SystemType::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of an outputs file: a single system's translation of one item,
/// before merging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOutput {
    pub item_id: String,
    pub system: String,
    pub system_type: SystemType,
    pub text: String,
}

/// A merged translation hypothesis: one distinct (item, text) pair together
/// with every system that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MTOutput {
    pub item_id: String,
    pub text: String,
    pub systems: BTreeSet<String>,
    pub system_type: SystemType,
}

/// Text key used for merging: NFC normalization plus trailing-whitespace
/// trim, so encoding variants of the same text collapse.
pub fn canonical_text(text: &str) -> String {
    let normalized: String = text.nfc().collect();
    normalized.trim_end().to_string()
}

/// Collapses outputs with identical text per item. The merged list is sorted
/// by (item_id, text); each entry's systems set is the union of contributors
/// and the type degrades to `Mixed` on disagreement.
pub fn merge_identical_outputs(raw: &[RawOutput]) -> Vec<MTOutput> {
    let mut groups: BTreeMap<(String, String), (BTreeSet<String>, BTreeSet<SystemType>)> =
        BTreeMap::new();
    for row in raw {
        let key = (row.item_id.clone(), canonical_text(&row.text));
        let entry = groups.entry(key).or_default();
        entry.0.insert(row.system.clone());
        entry.1.insert(row.system_type);
    }
    groups
        .into_iter()
        .map(|((item_id, text), (systems, types))| {
            let system_type = if types.len() == 1 {
                *types.iter().next().unwrap()
            } else {
                SystemType::Mixed
            };
            MTOutput {
                item_id,
                text,
                systems,
                system_type,
            }
        })
        .collect()
}
