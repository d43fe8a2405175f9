//! Rule application: turning merged MT outputs into pass/fail labels
//! (the core crate supplies the decision table), plus the `.lab.tsv`
//! format with header `item_id  text  verdict  origin`.

use std::collections::HashMap;
use std::path::Path;

use suiteval_core::labeling::{decide_verdict, Label, LabelSet, Origin, Verdict};
use suiteval_core::output::MTOutput;
use suiteval_core::CoreError;

use crate::corpus::CompiledItem;
use crate::error::{HarnessError, HarnessResult};
use crate::tsvio::{format_tsv, read_tsv};

pub const LABELS_HEADER: [&str; 4] = ["item_id", "text", "verdict", "origin"];

/// Applies one item's rules to one translation. Matching is unanchored
/// substring search unless the rule itself carries anchors.
pub fn label_output(item: &CompiledItem, output: &MTOutput) -> Label {
    let positive = item.positive.is_match(&output.text);
    let negative = item.negative.as_ref().map(|re| re.is_match(&output.text));
    Label {
        item_id: output.item_id.clone(),
        output_text: output.text.clone(),
        verdict: decide_verdict(positive, negative),
        origin: Origin::Automatic,
    }
}

/// Labels every merged output, `threads` ways in parallel. The result is
/// sorted by (item_id, text) regardless of schedule, so any thread count
/// produces identical label sets.
pub fn label_all(
    compiled: &[CompiledItem],
    outputs: &[MTOutput],
    suite_ref: &str,
    threads: usize,
) -> HarnessResult<LabelSet> {
    let by_id: HashMap<&str, &CompiledItem> =
        compiled.iter().map(|c| (c.item.id.as_str(), c)).collect();
    for output in outputs {
        if !by_id.contains_key(output.item_id.as_str()) {
            return Err(CoreError::UnknownItem(output.item_id.clone()).into());
        }
    }

    let threads = threads.max(1).min(outputs.len().max(1));
    let labels: Vec<Label> = if threads == 1 {
        outputs
            .iter()
            .map(|o| label_output(by_id[o.item_id.as_str()], o))
            .collect()
    } else {
        let chunk = outputs.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = outputs
                .chunks(chunk)
                .map(|slice| {
                    let by_id = &by_id;
                    scope.spawn(move || {
                        slice
                            .iter()
                            .map(|o| label_output(by_id[o.item_id.as_str()], o))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("labeling thread"))
                .collect()
        })
    };
    Ok(LabelSet::new(labels, suite_ref)?)
}

pub fn format_labels(labels: &LabelSet) -> String {
    let rows: Vec<Vec<String>> = labels
        .labels()
        .iter()
        .map(|l| {
            vec![
                l.item_id.clone(),
                l.output_text.clone(),
                l.verdict.as_str().to_string(),
                l.origin.as_str().to_string(),
            ]
        })
        .collect();
    format_tsv(&LABELS_HEADER, &rows)
}

pub fn read_labels(path: &Path, suite_ref: &str) -> HarnessResult<LabelSet> {
    let rows = read_tsv(path, &LABELS_HEADER)?;
    let mut labels = Vec::with_capacity(rows.len());
    for row in rows {
        let f = row.fields;
        let verdict = Verdict::parse(&f[2]).ok_or_else(|| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: format!("unknown verdict {:?}", f[2]),
        })?;
        let origin = Origin::parse(&f[3]).ok_or_else(|| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: format!("unknown origin {:?}", f[3]),
        })?;
        labels.push(Label {
            item_id: f[0].clone(),
            output_text: f[1].clone(),
            verdict,
            origin,
        });
    }
    Ok(LabelSet::new(labels, suite_ref)?)
}
