use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::category::CategoryPath;
use crate::error::{CoreError, CoreResult};
use crate::labeling::{LabelSet, Verdict};
use crate::output::{MTOutput, SystemType};
use crate::suite::TestSuite;

/// One passing and one failing translation of the same source: the unit a
/// QE system is asked to compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonPair {
    pub pair_id: String,
    pub item_id: String,
    pub source_text: String,
    pub passing: MTOutput,
    pub failing: MTOutput,
    pub category: CategoryPath,
}

/// Counts over a pair set, including the share of each MT system type among
/// the participating translation slots (two per pair).
#[derive(Debug, Clone, PartialEq)]
pub struct PairSetStats {
    pub pair_count: usize,
    pub source_count: usize,
    pub system_type_shares: BTreeMap<SystemType, f64>,
}

/// Deconstructs labeled outputs into the full bipartite product of
/// pass-labeled times fail-labeled translations per item. Unknown and
/// conflict labels contribute no pairs. Output order and pair ids are
/// deterministic: items by id, outputs by text, pass-major enumeration.
pub fn generate_pairs(
    suite: &TestSuite,
    outputs: &[MTOutput],
    labels: &LabelSet,
) -> CoreResult<Vec<ComparisonPair>> {
    let mut by_item: BTreeMap<&str, (Vec<&MTOutput>, Vec<&MTOutput>)> = BTreeMap::new();
    for out in outputs {
        let item = suite
            .get(&out.item_id)
            .ok_or_else(|| CoreError::UnknownItem(out.item_id.clone()))?;
        let label = labels.get(&out.item_id, &out.text).ok_or_else(|| {
            CoreError::MissingLabel {
                item_id: out.item_id.clone(),
                text: out.text.clone(),
            }
        })?;
        let entry = by_item.entry(item.id.as_str()).or_default();
        match label.verdict {
            Verdict::Pass => entry.0.push(out),
            Verdict::Fail => entry.1.push(out),
            Verdict::Unknown | Verdict::Conflict => {}
        }
    }

    let mut pairs = Vec::new();
    for (item_id, (mut passing, mut failing)) in by_item {
        passing.sort_by(|a, b| a.text.cmp(&b.text));
        failing.sort_by(|a, b| a.text.cmp(&b.text));
        let item = suite.get(item_id).unwrap();
        let mut ordinal = 0usize;
        for pass in &passing {
            for fail in &failing {
                pairs.push(ComparisonPair {
                    pair_id: format!("{item_id}#{ordinal:04}"),
                    item_id: item_id.into(),
                    source_text: item.source_text.clone(),
                    passing: (*pass).clone(),
                    failing: (*fail).clone(),
                    category: item.category.clone(),
                });
                ordinal += 1;
            }
        }
    }
    Ok(pairs)
}

/// Counts pairs and distinct sources, and tallies system-type shares over
/// the 2·|pairs| translation slots. Empty input yields zero counts and an
/// empty share map.
pub fn pair_stats(pairs: &[ComparisonPair]) -> PairSetStats {
    let mut sources: Vec<&str> = pairs.iter().map(|p| p.item_id.as_str()).collect();
    sources.sort_unstable();
    sources.dedup();

    let mut slot_counts: BTreeMap<SystemType, usize> = BTreeMap::new();
    for pair in pairs {
        *slot_counts.entry(pair.passing.system_type).or_default() += 1;
        *slot_counts.entry(pair.failing.system_type).or_default() += 1;
    }
    let total_slots = (2 * pairs.len()) as f64;
    let system_type_shares = slot_counts
        .into_iter()
        .map(|(ty, n)| (ty, n as f64 / total_slots))
        .collect();

    PairSetStats {
        pair_count: pairs.len(),
        source_count: sources.len(),
        system_type_shares,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{Label, Origin};
    use crate::suite::TestItem;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec;

    fn suite_of(ids: &[&str]) -> TestSuite {
        TestSuite::new(
            ids.iter()
                .map(|id| TestItem {
                    id: id.to_string(),
                    source_text: "src".to_string(),
                    category: CategoryPath::top("Ambiguity").unwrap(),
                    positive_rule: "x".to_string(),
                    negative_rule: None,
                    case_insensitive: false,
                    notes: None,
                })
                .collect(),
        )
        .unwrap()
    }

    fn out(item: &str, text: &str, ty: SystemType) -> MTOutput {
        MTOutput {
            item_id: item.to_string(),
            text: text.to_string(),
            systems: BTreeSet::from(["S".to_string()]),
            system_type: ty,
        }
    }

    fn labels_for(outputs: &[MTOutput], verdicts: &[Verdict]) -> LabelSet {
        LabelSet::new(
            outputs
                .iter()
                .zip(verdicts)
                .map(|(o, &v)| Label {
                    item_id: o.item_id.clone(),
                    output_text: o.text.clone(),
                    verdict: v,
                    origin: Origin::Automatic,
                })
                .collect(),
            "h",
        )
        .unwrap()
    }

    #[test]
    fn bipartite_product() {
        let suite = suite_of(&["i"]);
        let outputs = vec![
            out("i", "p1", SystemType::Neural),
            out("i", "p2", SystemType::Neural),
            out("i", "f1", SystemType::Neural),
            out("i", "f2", SystemType::Neural),
        ];
        let labels = labels_for(
            &outputs,
            &[Verdict::Pass, Verdict::Pass, Verdict::Fail, Verdict::Fail],
        );
        let pairs = generate_pairs(&suite, &outputs, &labels).unwrap();
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|p| p.passing.text.starts_with('p')));
        assert!(pairs.iter().all(|p| p.failing.text.starts_with('f')));
    }

    #[test]
    fn no_fail_no_pairs() {
        let suite = suite_of(&["i"]);
        let outputs = vec![
            out("i", "a", SystemType::Neural),
            out("i", "b", SystemType::Neural),
            out("i", "c", SystemType::Neural),
        ];
        let labels = labels_for(&outputs, &[Verdict::Pass, Verdict::Pass, Verdict::Pass]);
        assert!(generate_pairs(&suite, &outputs, &labels).unwrap().is_empty());
    }

    #[test]
    fn unknown_item_rejected() {
        let suite = suite_of(&["i"]);
        let outputs = vec![out("zzz", "a", SystemType::Neural)];
        let labels = labels_for(&outputs, &[Verdict::Pass]);
        let err = generate_pairs(&suite, &outputs, &labels).unwrap_err();
        assert_eq!(err, CoreError::UnknownItem("zzz".to_string()));
    }

    #[test]
    fn stable_under_permutation() {
        let suite = suite_of(&["a", "b"]);
        let outputs = vec![
            out("a", "p", SystemType::Neural),
            out("a", "f", SystemType::Neural),
            out("b", "p", SystemType::Neural),
            out("b", "f", SystemType::Neural),
        ];
        let labels = labels_for(
            &outputs,
            &[Verdict::Pass, Verdict::Fail, Verdict::Pass, Verdict::Fail],
        );
        let forward = generate_pairs(&suite, &outputs, &labels).unwrap();
        let mut shuffled = outputs.clone();
        shuffled.reverse();
        let backward = generate_pairs(&suite, &shuffled, &labels).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn stats_count_slots() {
        let suite = suite_of(&["a", "b"]);
        let outputs = vec![
            out("a", "p", SystemType::Neural),
            out("a", "f", SystemType::Neural),
            out("b", "p", SystemType::Neural),
            out("b", "f", SystemType::Mixed),
        ];
        let labels = labels_for(
            &outputs,
            &[Verdict::Pass, Verdict::Fail, Verdict::Pass, Verdict::Fail],
        );
        let pairs = generate_pairs(&suite, &outputs, &labels).unwrap();
        let stats = pair_stats(&pairs);
        assert_eq!(stats.pair_count, 2);
        assert_eq!(stats.source_count, 2);
        // 4 slots: 3 neural, 1 mixed.
        assert_eq!(stats.system_type_shares[&SystemType::Neural], 0.75);
        assert_eq!(stats.system_type_shares[&SystemType::Mixed], 0.25);
    }

    #[test]
    fn empty_stats() {
        let stats = pair_stats(&[]);
        assert_eq!(stats.pair_count, 0);
        assert_eq!(stats.source_count, 0);
        assert!(stats.system_type_shares.is_empty());
    }
}
