//! The `.pairs.tsv` format: canonical pass-first storage of comparison
//! pairs, header `pair_id  item_id  category  subcategory  source
//! text_pass  text_fail`.
//!
//! The pair file intentionally carries no system attribution, so pairs
//! read back from disk hold placeholder system metadata; pair statistics
//! are computed at generation time, not from the file.

use std::collections::BTreeSet;
use std::path::Path;

use suiteval_core::output::{MTOutput, SystemType};
use suiteval_core::{CategoryPath, ComparisonPair};

use crate::error::{HarnessError, HarnessResult};
use crate::tsvio::{format_tsv, read_tsv};

pub const PAIRS_HEADER: [&str; 7] = [
    "pair_id",
    "item_id",
    "category",
    "subcategory",
    "source",
    "text_pass",
    "text_fail",
];

pub fn format_pairs(pairs: &[ComparisonPair]) -> String {
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|p| {
            vec![
                p.pair_id.clone(),
                p.item_id.clone(),
                p.category.category().to_string(),
                p.category.subcategory().unwrap_or("").to_string(),
                p.source_text.clone(),
                p.passing.text.clone(),
                p.failing.text.clone(),
            ]
        })
        .collect();
    format_tsv(&PAIRS_HEADER, &rows)
}

pub fn read_pairs(path: &Path) -> HarnessResult<Vec<ComparisonPair>> {
    let rows = read_tsv(path, &PAIRS_HEADER)?;
    let mut pairs = Vec::with_capacity(rows.len());
    for row in rows {
        let f = row.fields;
        let category = CategoryPath::new(
            f[2].clone(),
            if f[3].is_empty() { None } else { Some(f[3].clone()) },
        )
        .ok_or_else(|| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: "empty category".into(),
        })?;
        let placeholder = |text: &str| MTOutput {
            item_id: f[1].clone(),
            text: text.to_string(),
            systems: BTreeSet::from(["unattributed".to_string()]),
            system_type: SystemType::Unknown,
        };
        pairs.push(ComparisonPair {
            pair_id: f[0].clone(),
            item_id: f[1].clone(),
            source_text: f[4].clone(),
            passing: placeholder(&f[5]),
            failing: placeholder(&f[6]),
            category,
        });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn round_trip_preserves_texts_and_categories() {
        let out = |text: &str| MTOutput {
            item_id: "i".into(),
            text: text.into(),
            systems: BTreeSet::from(["unattributed".to_string()]),
            system_type: SystemType::Unknown,
        };
        let pairs = vec![ComparisonPair {
            pair_id: "i#0000".into(),
            item_id: "i".into(),
            source_text: "Der Mann\tstand.".into(),
            passing: out("the man"),
            failing: out("the husband"),
            category: CategoryPath::with_sub("Verb tense/aspect/mood/type", "present").unwrap(),
        }];
        let text = format_pairs(&pairs);
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let back = read_pairs(f.path()).unwrap();
        assert_eq!(back, pairs);
    }
}
