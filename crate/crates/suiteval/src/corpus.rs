//! Suite, outputs and override file ingestion, plus rule compilation under
//! the supported regex dialect.
//!
//! Formats (all UTF-8, LF, header row, `\t`/`\n`/`\\` escaping in fields):
//!
//! * `.suite.tsv`: `id  category  subcategory  source  positive_regex
//!   negative_regex  flags  notes` — empty subcategory/negative mean
//!   absent; flags is a comma-separated token list, currently only `i`
//!   (case-insensitive rules).
//! * `.hyp.tsv`: `item_id  system  system_type  text`.
//! * `.ovr.tsv`: `item_id  text  verdict  annotator` with verdict
//!   `pass`/`fail`.

use std::path::Path;

use regex::{Regex, RegexBuilder};
use suiteval_core::labeling::{OverrideRecord, OverrideVerdict};
use suiteval_core::output::{canonical_text, RawOutput, SystemType};
use suiteval_core::{CategoryPath, TestItem, TestSuite};

use crate::error::{HarnessError, HarnessResult};
use crate::tsvio::{format_tsv, read_tsv};
use crate::util::sha256_hex;

pub const SUITE_HEADER: [&str; 8] = [
    "id",
    "category",
    "subcategory",
    "source",
    "positive_regex",
    "negative_regex",
    "flags",
    "notes",
];
pub const OUTPUTS_HEADER: [&str; 4] = ["item_id", "system", "system_type", "text"];
pub const OVERRIDES_HEADER: [&str; 4] = ["item_id", "text", "verdict", "annotator"];

/// The one supported rule dialect: a Perl-compatible subset (character
/// classes, alternation, anchors, Unicode-aware word boundaries,
/// quantifiers, groups; no backreferences). Rules are case-sensitive
/// unless the item carries the `i` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegexDialect {
    #[default]
    PerlSubset,
}

impl RegexDialect {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "perl-subset" | "default" => Some(RegexDialect::PerlSubset),
            _ => None,
        }
    }

    pub fn compile(&self, pattern: &str, case_insensitive: bool) -> Result<Regex, String> {
        RegexBuilder::new(pattern)
            .case_insensitive(case_insensitive)
            .unicode(true)
            .build()
            .map_err(|e| e.to_string())
    }
}

/// A test item with its rules compiled, ready for matching.
pub struct CompiledItem {
    pub item: TestItem,
    pub positive: Regex,
    pub negative: Option<Regex>,
}

pub fn compile_item(item: &TestItem, dialect: RegexDialect) -> HarnessResult<CompiledItem> {
    let positive = dialect
        .compile(&item.positive_rule, item.case_insensitive)
        .map_err(|message| HarnessError::BadRule {
            item_id: item.id.clone(),
            which: "positive",
            pattern: item.positive_rule.clone(),
            message,
        })?;
    let negative = match &item.negative_rule {
        Some(rule) => Some(dialect.compile(rule, item.case_insensitive).map_err(
            |message| HarnessError::BadRule {
                item_id: item.id.clone(),
                which: "negative",
                pattern: rule.clone(),
                message,
            },
        )?),
        None => None,
    };
    Ok(CompiledItem {
        item: item.clone(),
        positive,
        negative,
    })
}

pub fn compile_suite(suite: &TestSuite, dialect: RegexDialect) -> HarnessResult<Vec<CompiledItem>> {
    suite.items().iter().map(|i| compile_item(i, dialect)).collect()
}

fn parse_flags(path: &Path, line: usize, flags: &str) -> HarnessResult<bool> {
    let mut case_insensitive = false;
    for token in flags.split(',').filter(|t| !t.is_empty()) {
        match token {
            "i" => case_insensitive = true,
            other => {
                return Err(HarnessError::Parse {
                    path: path.into(),
                    line,
                    message: format!("unknown flag {other:?}"),
                })
            }
        }
    }
    Ok(case_insensitive)
}

/// Loads and fully validates a suite file: unique ids, non-empty sources,
/// compiling rules. Items come back in file order.
pub fn load_suite(path: &Path, dialect: RegexDialect) -> HarnessResult<TestSuite> {
    let rows = read_tsv(path, &SUITE_HEADER)?;
    let mut items = Vec::with_capacity(rows.len());
    for row in rows {
        let f = &row.fields;
        let category = CategoryPath::new(
            f[1].clone(),
            if f[2].is_empty() { None } else { Some(f[2].clone()) },
        )
        .ok_or_else(|| HarnessError::Parse {
            path: path.into(),
            line: row.line,
            message: "empty category".into(),
        })?;
        let item = TestItem {
            id: f[0].clone(),
            source_text: f[3].clone(),
            category,
            positive_rule: f[4].clone(),
            negative_rule: if f[5].is_empty() { None } else { Some(f[5].clone()) },
            case_insensitive: parse_flags(path, row.line, &f[6])?,
            notes: if f[7].is_empty() { None } else { Some(f[7].clone()) },
        };
        if item.source_text.trim().is_empty() {
            return Err(HarnessError::Parse {
                path: path.into(),
                line: row.line,
                message: format!("item {}: empty source text", item.id),
            });
        }
        items.push(item);
    }
    let suite = TestSuite::new(items)?;
    compile_suite(&suite, dialect)?;
    Ok(suite)
}

/// Serializes a suite back into the `.suite.tsv` format.
pub fn format_suite(suite: &TestSuite) -> String {
    let rows: Vec<Vec<String>> = suite
        .items()
        .iter()
        .map(|i| {
            vec![
                i.id.clone(),
                i.category.category().to_string(),
                i.category.subcategory().unwrap_or("").to_string(),
                i.source_text.clone(),
                i.positive_rule.clone(),
                i.negative_rule.clone().unwrap_or_default(),
                if i.case_insensitive { "i".to_string() } else { String::new() },
                i.notes.clone().unwrap_or_default(),
            ]
        })
        .collect();
    format_tsv(&SUITE_HEADER, &rows)
}

/// Content identity of a suite, independent of the file it came from.
pub fn suite_hash(suite: &TestSuite) -> String {
    sha256_hex(format_suite(suite).as_bytes())
}

/// Loads raw MT outputs in file order; no merging happens here.
pub fn load_outputs(path: &Path) -> HarnessResult<Vec<RawOutput>> {
    let rows = read_tsv(path, &OUTPUTS_HEADER)?;
    rows.into_iter()
        .map(|row| {
            let f = row.fields;
            let system_type =
                SystemType::parse(&f[2]).ok_or_else(|| HarnessError::Parse {
                    path: path.into(),
                    line: row.line,
                    message: format!("unknown system_type {:?}", f[2]),
                })?;
            Ok(RawOutput {
                item_id: f[0].clone(),
                system: f[1].clone(),
                system_type,
                text: f[3].clone(),
            })
        })
        .collect()
}

/// Loads manual override records in file order. Texts are canonicalized
/// the same way merging canonicalizes output texts, so overrides written
/// from raw system output still match their merged label keys.
pub fn load_overrides(path: &Path) -> HarnessResult<Vec<OverrideRecord>> {
    let rows = read_tsv(path, &OVERRIDES_HEADER)?;
    rows.into_iter()
        .map(|row| {
            let f = row.fields;
            let verdict = match f[2].as_str() {
                "pass" => OverrideVerdict::Pass,
                "fail" => OverrideVerdict::Fail,
                other => {
                    return Err(HarnessError::Parse {
                        path: path.into(),
                        line: row.line,
                        message: format!("verdict must be pass or fail, got {other:?}"),
                    })
                }
            };
            Ok(OverrideRecord {
                item_id: f[0].clone(),
                output_text: canonical_text(&f[1]),
                verdict,
                annotator: f[3].clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "id\tcategory\tsubcategory\tsource\tpositive_regex\tnegative_regex\tflags\tnotes\n";

    #[test]
    fn single_item_suite() {
        let f = write_temp(&format!(
            "{HEADER}amb-001\tAmbiguity\t\tDer Mann stand auf.\t\\\\bman\\\\b\t\t\t\n"
        ));
        let suite = load_suite(f.path(), RegexDialect::PerlSubset).unwrap();
        assert_eq!(suite.len(), 1);
        assert_eq!(suite.items()[0].id, "amb-001");
        assert_eq!(suite.items()[0].negative_rule, None);
    }

    #[test]
    fn duplicate_id_names_the_id() {
        let f = write_temp(&format!(
            "{HEADER}x\tAmbiguity\t\ts\ta\t\t\t\nx\tAmbiguity\t\ts\tb\t\t\t\n"
        ));
        let err = load_suite(f.path(), RegexDialect::PerlSubset).unwrap_err();
        assert!(err.to_string().contains("duplicate item id: x"));
    }

    #[test]
    fn bad_rule_names_item_and_position() {
        let f = write_temp(&format!("{HEADER}bad-1\tAmbiguity\t\ts\t(\t\t\t\n"));
        let err = load_suite(f.path(), RegexDialect::PerlSubset).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad-1") && msg.contains("positive"), "{msg}");
    }

    #[test]
    fn malformed_row_reports_line() {
        let f = write_temp(&format!("{HEADER}only\ttwo\n"));
        let err = load_suite(f.path(), RegexDialect::PerlSubset).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn suite_round_trip() {
        let f = write_temp(&format!(
            "{HEADER}a\tAmbiguity\t\tDer Mann.\t\\\\bman\\\\b\t\\\\bhusband\\\\b\ti\tnote here\nb\tVerb tense/aspect/mood/type\tpresent\tEr geht.\tgoes\t\t\t\n"
        ));
        let suite = load_suite(f.path(), RegexDialect::PerlSubset).unwrap();
        let f2 = write_temp(&format_suite(&suite));
        let suite2 = load_suite(f2.path(), RegexDialect::PerlSubset).unwrap();
        assert_eq!(suite, suite2);
    }

    #[test]
    fn outputs_parse_and_report_bad_rows() {
        let f = write_temp("item_id\tsystem\tsystem_type\ttext\ni\tS1\tneural\tthe man\ni\tS2\tphrase_based\tthe spouse\n");
        let outs = load_outputs(f.path()).unwrap();
        assert_eq!(outs.len(), 2);
        assert_eq!(outs[1].system_type, SystemType::PhraseBased);

        let bad = write_temp("item_id\tsystem\tsystem_type\ttext\ni\tS1\tneural\n");
        assert!(load_outputs(bad.path()).is_err());

        let empty = write_temp("item_id\tsystem\tsystem_type\ttext\n");
        assert!(load_outputs(empty.path()).unwrap().is_empty());
    }

    #[test]
    fn overrides_reject_other_verdicts() {
        let f = write_temp("item_id\ttext\tverdict\tannotator\ni\tt\tconflict\tme\n");
        assert!(load_overrides(f.path()).is_err());
        let ok = write_temp("item_id\ttext\tverdict\tannotator\ni\tt\tpass\tme\n");
        assert_eq!(load_overrides(ok.path()).unwrap().len(), 1);
    }

    #[test]
    fn case_insensitive_flag_honored() {
        let dialect = RegexDialect::PerlSubset;
        let re = dialect.compile(r"\bman\b", true).unwrap();
        assert!(re.is_match("The MAN stood."));
        let re = dialect.compile(r"\bman\b", false).unwrap();
        assert!(!re.is_match("The MAN stood."));
    }

    #[test]
    fn unicode_word_boundaries() {
        let dialect = RegexDialect::PerlSubset;
        let re = dialect.compile(r"\bMann\b", false).unwrap();
        assert!(re.is_match("Der Mann übernahm."));
        assert!(!re.is_match("Die Mannschaft übernahm."));
    }
}
