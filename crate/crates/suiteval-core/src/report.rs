use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde_json::{json, Value};

use crate::error::{CoreError, CoreResult};
use crate::evaluation::{CategoryResult, SystemReport};
use crate::tsv::escape_field;

/// Output format for the evaluation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Tsv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(ReportFormat::Text),
            "tsv" => Some(ReportFormat::Tsv),
            "json" => Some(ReportFormat::Json),
            "markdown" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ReportFormat::Text => "text",
            ReportFormat::Tsv => "tsv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "markdown",
        }
    }
}

/// A rendered report. TSV output keeps one table per document, so the
/// subcategory tables come back as named extra documents; the other formats
/// hold everything in `main`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedReport {
    pub main: String,
    pub subtables: Vec<(String, String)>,
}

struct Row {
    label: String,
    amount: Option<usize>,
    values: Vec<f64>,
    low_sample: bool,
}

fn fmt1(x: f64) -> String {
    format!("{x:.1}")
}

/// Displayed ties all get the mark, mirroring how equal best scores are
/// bolded in published tables.
fn best_mask(values: &[f64]) -> Vec<bool> {
    let rendered: Vec<String> = values.iter().map(|&v| fmt1(v)).collect();
    let best = rendered
        .iter()
        .zip(values)
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(s, _)| s.clone());
    match best {
        Some(best) => rendered.iter().map(|s| *s == best).collect(),
        None => Vec::new(),
    }
}

fn check_same_structure(reports: &[SystemReport]) -> CoreResult<()> {
    let first = &reports[0];
    for other in &reports[1..] {
        let same_rows = |a: &[CategoryResult], b: &[CategoryResult]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| x.category == y.category && x.sample_count == y.sample_count)
        };
        if !same_rows(&first.categories, &other.categories)
            || first.subtables.len() != other.subtables.len()
            || !first.subtables.iter().zip(&other.subtables).all(
                |((ka, va), (kb, vb))| ka == kb && same_rows(va, vb),
            )
        {
            return Err(CoreError::MismatchedReports);
        }
    }
    Ok(())
}

fn category_rows(
    reports: &[SystemReport],
    select: impl Fn(&SystemReport) -> &[CategoryResult],
    label_of: impl Fn(&CategoryResult) -> String,
) -> Vec<Row> {
    let first = select(&reports[0]);
    (0..first.len())
        .map(|i| {
            let row = &first[i];
            Row {
                label: label_of(row),
                amount: Some(row.sample_count),
                values: reports.iter().map(|r| select(r)[i].accuracy_percent).collect(),
                low_sample: row.low_sample,
            }
        })
        .collect()
}

fn footer_rows(reports: &[SystemReport]) -> Vec<Row> {
    let total: usize = reports[0].categories.iter().map(|c| c.sample_count).sum();
    let micro = Row {
        label: "Total".to_string(),
        amount: Some(total),
        values: reports.iter().map(|r| r.micro_total_percent).collect(),
        low_sample: false,
    };
    let macro_row = Row {
        label: "weighed".to_string(),
        amount: None,
        values: reports.iter().map(|r| r.macro_weighed_percent).collect(),
        low_sample: false,
    };
    alloc::vec![micro, macro_row]
}

fn render_text_table(systems: &[&str], rows: &[Row], footers: &[Row]) -> String {
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header: Vec<String> = alloc::vec!["category".to_string(), "amount".to_string()];
    header.extend(systems.iter().map(|s| s.to_string()));
    header.push("flags".to_string());
    cells.push(header);
    for (is_footer, row) in rows
        .iter()
        .map(|r| (false, r))
        .chain(footers.iter().map(|r| (true, r)))
    {
        let mask = best_mask(&row.values);
        let mut line = alloc::vec![
            row.label.clone(),
            row.amount.map(|a| a.to_string()).unwrap_or_default(),
        ];
        for (i, v) in row.values.iter().enumerate() {
            let mut cell = fmt1(*v);
            if mask[i] {
                cell.push('*');
            }
            line.push(cell);
        }
        line.push(if row.low_sample { "low".to_string() } else { String::new() });
        let _ = is_footer;
        cells.push(line);
    }

    let cols = cells[0].len();
    let mut widths = alloc::vec![0usize; cols];
    for row in &cells {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    for (ri, row) in cells.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let pad = widths[i] - c.chars().count();
            if i == 0 {
                out.push_str(c);
                for _ in 0..pad {
                    out.push(' ');
                }
            } else {
                for _ in 0..pad {
                    out.push(' ');
                }
                out.push_str(c);
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
        if ri == 0 || ri == cells.len() - 1 - footers.len() {
            let width: usize = widths.iter().sum::<usize>() + 2 * (cols - 1);
            for _ in 0..width {
                out.push('-');
            }
            out.push('\n');
        }
    }
    out
}

fn render_markdown_table(systems: &[&str], rows: &[Row], footers: &[Row]) -> String {
    let mut out = String::new();
    out.push_str("| category | amount |");
    for s in systems {
        out.push_str(&format!(" {s} |"));
    }
    out.push_str(" flags |\n");
    out.push_str("| --- | ---: |");
    for _ in systems {
        out.push_str(" ---: |");
    }
    out.push_str(" --- |\n");
    for row in rows.iter().chain(footers) {
        let mask = best_mask(&row.values);
        out.push_str(&format!(
            "| {} | {} |",
            row.label,
            row.amount.map(|a| a.to_string()).unwrap_or_default()
        ));
        for (i, v) in row.values.iter().enumerate() {
            let cell = fmt1(*v);
            if mask[i] {
                out.push_str(&format!(" **{cell}** |"));
            } else {
                out.push_str(&format!(" {cell} |"));
            }
        }
        out.push_str(&format!(
            " {} |\n",
            if row.low_sample { "low" } else { "" }
        ));
    }
    out
}

fn render_tsv_table(systems: &[&str], rows: &[Row], footers: &[Row]) -> String {
    let mut out = String::from("category\tamount");
    for s in systems {
        out.push('\t');
        out.push_str(&escape_field(s));
    }
    out.push('\n');
    for (footer, row) in rows
        .iter()
        .map(|r| (false, r))
        .chain(footers.iter().map(|r| (true, r)))
    {
        let mask = best_mask(&row.values);
        let label = if footer {
            format!("__{}__", row.label.to_lowercase())
        } else {
            escape_field(&row.label)
        };
        out.push_str(&label);
        out.push('\t');
        if let Some(a) = row.amount {
            out.push_str(&a.to_string());
        }
        for (i, v) in row.values.iter().enumerate() {
            out.push('\t');
            out.push_str(&fmt1(*v));
            if mask[i] {
                out.push('*');
            }
        }
        out.push('\n');
    }
    out
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    let mut last_us = true;
    for c in s.chars() {
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
            last_us = false;
        } else if !last_us {
            out.push('_');
            last_us = true;
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    out
}

fn render_json(reports: &[SystemReport]) -> String {
    let first = &reports[0];
    let acc_map = |pick: &dyn Fn(&SystemReport) -> f64| -> Value {
        let mut map = serde_json::Map::new();
        for r in reports {
            map.insert(r.system_name.clone(), json!(pick(r)));
        }
        Value::Object(map)
    };
    let rows_json = |select: &dyn Fn(&SystemReport) -> &[CategoryResult]| -> Value {
        let rows = select(first);
        Value::Array(
            (0..rows.len())
                .map(|i| {
                    json!({
                        "category": rows[i].category.to_string(),
                        "amount": rows[i].sample_count,
                        "accuracy_percent": acc_map(&|r: &SystemReport| select(r)[i].accuracy_percent),
                        "low_sample": rows[i].low_sample,
                    })
                })
                .collect(),
        )
    };

    let mut subtables = serde_json::Map::new();
    for parent in first.subtables.keys() {
        subtables.insert(
            parent.clone(),
            rows_json(&|r: &SystemReport| r.subtables[parent].as_slice()),
        );
    }
    let low_flags: Vec<String> = first
        .categories
        .iter()
        .filter(|c| c.low_sample)
        .map(|c| c.category.to_string())
        .collect();
    let doc = json!({
        "schema_version": 1,
        "tie_policy": first.tie_policy.as_str(),
        "low_sample_threshold": first.low_sample_threshold,
        "systems": reports.iter().map(|r| r.system_name.clone()).collect::<Vec<_>>(),
        "categories": rows_json(&|r: &SystemReport| r.categories.as_slice()),
        "subtables": Value::Object(subtables),
        "totals": {
            "micro": acc_map(&|r: &SystemReport| r.micro_total_percent),
            "macro": acc_map(&|r: &SystemReport| r.macro_weighed_percent),
        },
        "flags": { "low_sample": low_flags },
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("report serialization");
    out.push('\n');
    out
}

/// Renders one table of category rows times system columns, with `Total`
/// (micro) and `weighed` (macro) footer rows and the per-row best values
/// marked. All reports must describe the same pair set.
pub fn render_report(
    reports: &[SystemReport],
    format: ReportFormat,
) -> CoreResult<RenderedReport> {
    if reports.is_empty() {
        return Err(CoreError::NothingToEvaluate);
    }
    check_same_structure(reports)?;

    let systems: Vec<&str> = reports.iter().map(|r| r.system_name.as_str()).collect();
    let main_rows = category_rows(
        reports,
        |r| r.categories.as_slice(),
        |c| c.category.category().to_string(),
    );
    let footers = footer_rows(reports);
    let sub_names: Vec<String> = reports[0].subtables.keys().cloned().collect();
    let sub_rows: Vec<(String, Vec<Row>)> = sub_names
        .iter()
        .map(|parent| {
            let rows = category_rows(
                reports,
                |r| r.subtables[parent].as_slice(),
                |c| c.category.subcategory().unwrap_or("").to_string(),
            );
            (parent.clone(), rows)
        })
        .collect();

    match format {
        ReportFormat::Text => {
            let mut main = render_text_table(&systems, &main_rows, &footers);
            for (parent, rows) in &sub_rows {
                main.push('\n');
                main.push_str(&format!("== {parent} ==\n"));
                main.push_str(&render_text_table(&systems, rows, &[]));
            }
            Ok(RenderedReport {
                main,
                subtables: Vec::new(),
            })
        }
        ReportFormat::Markdown => {
            let mut main = String::from("## QE accuracy (%) per error category\n\n");
            main.push_str(&render_markdown_table(&systems, &main_rows, &footers));
            for (parent, rows) in &sub_rows {
                main.push('\n');
                main.push_str(&format!("## {parent}\n\n"));
                main.push_str(&render_markdown_table(&systems, rows, &[]));
            }
            Ok(RenderedReport {
                main,
                subtables: Vec::new(),
            })
        }
        ReportFormat::Tsv => {
            let main = render_tsv_table(&systems, &main_rows, &footers);
            let subtables = sub_rows
                .iter()
                .map(|(parent, rows)| (slug(parent), render_tsv_table(&systems, rows, &[])))
                .collect();
            Ok(RenderedReport { main, subtables })
        }
        ReportFormat::Json => Ok(RenderedReport {
            main: render_json(reports),
            subtables: Vec::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryPath;
    use crate::evaluation::{aggregate_tallies, AggregateConfig, CategoryTally, TiePolicy};

    fn report(name: &str, rows: &[(&str, usize, f64)]) -> SystemReport {
        let tallies: Vec<CategoryTally> = rows
            .iter()
            .map(|(cat, n, credit)| CategoryTally {
                category: CategoryPath::top(*cat).unwrap(),
                sample_count: *n,
                correct_credit: *credit,
            })
            .collect();
        aggregate_tallies(name, TiePolicy::HalfCredit, &tallies, AggregateConfig::default())
            .unwrap()
    }

    #[test]
    fn single_row_totals() {
        let r = report("sys", &[("Ambiguity", 10, 8.0)]);
        let doc = render_report(&[r], ReportFormat::Text).unwrap();
        assert!(doc.main.contains("Total"));
        assert!(doc.main.contains("weighed"));
        assert!(doc.main.contains("80.0"));
    }

    #[test]
    fn ties_all_marked() {
        let a = report("sysA", &[("C", 10, 8.0)]);
        let b = report("sysB", &[("C", 10, 8.0)]);
        let doc = render_report(&[a, b], ReportFormat::Tsv).unwrap();
        let data_line = doc.main.lines().nth(1).unwrap();
        assert_eq!(data_line, "C\t10\t80.0*\t80.0*");
    }

    #[test]
    fn markdown_bolds_best() {
        let a = report("sysA", &[("C", 10, 8.0)]);
        let b = report("sysB", &[("C", 10, 6.0)]);
        let doc = render_report(&[a, b], ReportFormat::Markdown).unwrap();
        assert!(doc.main.contains("**80.0**"));
        assert!(!doc.main.contains("**60.0**"));
    }

    #[test]
    fn mismatched_reports_rejected() {
        let a = report("sysA", &[("C", 10, 8.0)]);
        let b = report("sysB", &[("D", 10, 6.0)]);
        let err = render_report(&[a, b], ReportFormat::Text).unwrap_err();
        assert_eq!(err, CoreError::MismatchedReports);
    }

    #[test]
    fn json_round_trips_exact_values() {
        let a = report("sysA", &[("C", 3, 2.0), ("D", 7, 3.0)]);
        let micro = a.micro_total_percent;
        let macro_v = a.macro_weighed_percent;
        let doc = render_report(&[a], ReportFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&doc.main).unwrap();
        assert_eq!(parsed["totals"]["micro"]["sysA"].as_f64().unwrap(), micro);
        assert_eq!(parsed["totals"]["macro"]["sysA"].as_f64().unwrap(), macro_v);
        assert_eq!(
            parsed["categories"][0]["accuracy_percent"]["sysA"]
                .as_f64()
                .unwrap(),
            100.0 * 2.0 / 3.0
        );
        assert_eq!(parsed["schema_version"], 1);
    }

    #[test]
    fn deterministic_bytes() {
        let a = report("sysA", &[("C", 10, 8.0), ("D", 5, 1.0)]);
        for format in [
            ReportFormat::Text,
            ReportFormat::Tsv,
            ReportFormat::Json,
            ReportFormat::Markdown,
        ] {
            let one = render_report(core::slice::from_ref(&a), format).unwrap();
            let two = render_report(core::slice::from_ref(&a), format).unwrap();
            assert_eq!(one, two);
        }
    }

    #[test]
    fn slug_sanitizes() {
        assert_eq!(slug("Verb tense/aspect/mood/type"), "verb_tense_aspect_mood_type");
    }
}
