//! Line-oriented TSV reading and writing. All files are UTF-8 with LF line
//! endings and a header row; tabs, newlines and backslashes inside fields
//! are escaped per `suiteval_core::tsv`.

use std::fs;
use std::path::Path;

use suiteval_core::tsv::{escape_field, unescape_field};

use crate::error::{io_err, HarnessError, HarnessResult};

/// A parsed data row with its 1-based line number for diagnostics.
#[derive(Debug)]
pub struct TsvRow {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Reads a TSV file, checks the header matches exactly, unescapes fields
/// and enforces the column count per row. Blank lines are skipped.
pub fn read_tsv(path: &Path, expected_header: &[&str]) -> HarnessResult<Vec<TsvRow>> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    let mut lines = content.lines().enumerate();

    let header = loop {
        match lines.next() {
            Some((_, l)) if l.is_empty() => continue,
            Some((n, l)) => break (n + 1, l),
            None => {
                return Err(HarnessError::Parse {
                    path: path.into(),
                    line: 1,
                    message: format!("empty file, expected header {}", expected_header.join("\\t")),
                })
            }
        }
    };
    let got: Vec<&str> = header.1.split('\t').collect();
    if got != expected_header {
        return Err(HarnessError::Parse {
            path: path.into(),
            line: header.0,
            message: format!(
                "bad header: expected {:?}, got {:?}",
                expected_header.join("\t"),
                header.1
            ),
        });
    }

    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let parts: Vec<&str> = raw.split('\t').collect();
        if parts.len() != expected_header.len() {
            return Err(HarnessError::Parse {
                path: path.into(),
                line,
                message: format!(
                    "expected {} columns, found {}",
                    expected_header.len(),
                    parts.len()
                ),
            });
        }
        let mut fields = Vec::with_capacity(parts.len());
        for part in parts {
            match unescape_field(part) {
                Some(f) => fields.push(f),
                None => {
                    return Err(HarnessError::Parse {
                        path: path.into(),
                        line,
                        message: format!("bad escape sequence in field {part:?}"),
                    })
                }
            }
        }
        rows.push(TsvRow { line, fields });
    }
    Ok(rows)
}

/// Renders header + rows into TSV bytes with proper escaping.
pub fn format_tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        let escaped: Vec<String> = row.iter().map(|f| escape_field(f)).collect();
        out.push_str(&escaped.join("\t"));
        out.push('\n');
    }
    out
}
