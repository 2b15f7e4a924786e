//! The delimited collection format.
//!
//! The first line is exactly [`HEADER`]. Labels are `0`/`1`. `duplicate_of`
//! is empty for ordinary rows. The two text columns are always quoted on
//! output; other columns are quoted only when they contain a delimiter, a
//! quote or a line break. Quotes inside quoted fields are doubled. Lines end
//! with `\n`.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::record::{validate_records, AnnotationRecord, RecordViolation};
use crate::taxonomy::{ErrorCode, LabelVector};

pub const COLUMNS: [&str; 22] = [
    "item_id",
    "source_id",
    "run_id",
    "annotator_id",
    "no_error",
    "A1",
    "A2",
    "A3",
    "A4",
    "A5",
    "B1",
    "B2",
    "C1",
    "C2",
    "C3",
    "D1_1",
    "D1_2",
    "D2_1",
    "D2_2",
    "duplicate_of",
    "source_text",
    "simplified_text",
];

pub const HEADER: &str = "item_id,source_id,run_id,annotator_id,no_error,A1,A2,A3,A4,A5,B1,B2,C1,C2,C3,D1_1,D1_2,D2_1,D2_2,duplicate_of,source_text,simplified_text";

const FIRST_CODE_COL: usize = 5;

/// A structural problem that prevents a row from being materialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionedError {
    pub line: u64,
    pub column: Option<String>,
    pub message: String,
}

impl fmt::Display for PositionedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        if let Some(col) = &self.column {
            write!(f, ", column {col}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CollectionError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{} parse error(s):\n{}", .0.len(), join(.0))]
    Parse(Vec<PositionedError>),
    #[error("{} violation(s):\n{}", .0.len(), join(.0))]
    Invalid(Vec<RecordViolation>),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    /// Any invariant violation fails the read.
    #[default]
    Strict,
    /// Violations are returned alongside the records.
    Lenient,
}

#[derive(Debug, Clone)]
pub struct ParsedCollection {
    pub records: Vec<AnnotationRecord>,
    pub violations: Vec<RecordViolation>,
}

/// Reads and validates a collection in strict mode.
pub fn parse_collection<R: Read>(reader: R) -> Result<Vec<AnnotationRecord>, CollectionError> {
    read_collection(reader, ValidationMode::Strict).map(|p| p.records)
}

pub fn read_collection<R: Read>(
    reader: R,
    mode: ValidationMode,
) -> Result<ParsedCollection, CollectionError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut errors = Vec::new();
    let mut records = Vec::new();
    let mut lines = Vec::new();
    let mut raw = csv::StringRecord::new();

    let header_ok = match rdr.read_record(&mut raw) {
        Ok(true) => check_header(&raw, &mut errors),
        Ok(false) => {
            errors.push(PositionedError {
                line: 1,
                column: None,
                message: "missing header line".to_string(),
            });
            false
        }
        Err(e) => {
            errors.push(csv_error(e));
            false
        }
    };
    if !header_ok {
        return Err(CollectionError::Parse(errors));
    }

    loop {
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {
                let line = raw.position().map_or(0, |p| p.line());
                match parse_row(&raw, line) {
                    Ok(rec) => {
                        records.push(rec);
                        lines.push(line);
                    }
                    Err(mut e) => errors.append(&mut e),
                }
            }
            Err(e) => {
                if let csv::ErrorKind::Io(_) = e.kind() {
                    return Err(CollectionError::Io(e.into()));
                }
                errors.push(csv_error(e));
            }
        }
    }
    if !errors.is_empty() {
        return Err(CollectionError::Parse(errors));
    }

    let mut violations = validate_records(&records);
    for v in &mut violations {
        v.line = lines.get(v.row).copied();
    }
    if mode == ValidationMode::Strict && !violations.is_empty() {
        return Err(CollectionError::Invalid(violations));
    }
    Ok(ParsedCollection {
        records,
        violations,
    })
}

fn csv_error(e: csv::Error) -> PositionedError {
    let line = e.position().map_or(0, |p| p.line());
    PositionedError {
        line,
        column: None,
        message: e.to_string(),
    }
}

fn check_header(raw: &csv::StringRecord, errors: &mut Vec<PositionedError>) -> bool {
    let got: Vec<&str> = raw
        .iter()
        .enumerate()
        .map(|(i, s)| if i == 0 { s.trim_start_matches('\u{feff}') } else { s })
        .collect();
    if got == COLUMNS {
        return true;
    }
    let missing: Vec<&str> = COLUMNS.iter().filter(|c| !got.contains(c)).copied().collect();
    let unexpected: Vec<&str> = got.iter().filter(|c| !COLUMNS.contains(c)).copied().collect();
    for m in &missing {
        errors.push(PositionedError {
            line: 1,
            column: Some(m.to_string()),
            message: "missing column".to_string(),
        });
    }
    for u in &unexpected {
        errors.push(PositionedError {
            line: 1,
            column: Some(u.to_string()),
            message: "unexpected column".to_string(),
        });
    }
    if missing.is_empty() && unexpected.is_empty() {
        errors.push(PositionedError {
            line: 1,
            column: None,
            message: format!("columns out of order; expected `{HEADER}`"),
        });
    }
    false
}

fn parse_row(raw: &csv::StringRecord, line: u64) -> Result<AnnotationRecord, Vec<PositionedError>> {
    let mut errors = Vec::new();
    if raw.len() != COLUMNS.len() {
        errors.push(PositionedError {
            line,
            column: None,
            message: format!("expected {} fields, found {}", COLUMNS.len(), raw.len()),
        });
        return Err(errors);
    }
    let field = |i: usize| raw.get(i).unwrap_or_default();
    let mut flag = |i: usize| -> bool {
        match field(i) {
            "0" => false,
            "1" => true,
            other => {
                errors.push(PositionedError {
                    line,
                    column: Some(COLUMNS[i].to_string()),
                    message: format!("expected 0 or 1, found `{other}`"),
                });
                false
            }
        }
    };

    let mut labels = LabelVector::default();
    labels.no_error = flag(4);
    for (k, code) in ErrorCode::ALL.into_iter().enumerate() {
        let on = flag(FIRST_CODE_COL + k);
        labels.set(code, on);
    }

    for (i, name) in [(0, "item_id"), (3, "annotator_id")] {
        if field(i).is_empty() {
            errors.push(PositionedError {
                line,
                column: Some(name.to_string()),
                message: "empty identifier".to_string(),
            });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let dup = field(19);
    Ok(AnnotationRecord {
        item_id: field(0).to_string(),
        source_id: field(1).to_string(),
        run_id: field(2).to_string(),
        annotator_id: field(3).to_string(),
        labels,
        duplicate_of: (!dup.is_empty()).then(|| dup.to_string()),
        source_text: field(20).to_string(),
        simplified_text: field(21).to_string(),
    })
}

fn push_plain(out: &mut String, s: &str) {
    if s.contains([',', '"', '\n', '\r']) {
        push_quoted(out, s);
    } else {
        out.push_str(s);
    }
}

fn push_quoted(out: &mut String, s: &str) {
    out.push('"');
    out.push_str(&s.replace('"', "\"\""));
    out.push('"');
}

/// Serializes a collection in the canonical layout.
pub fn collection_to_string(records: &[AnnotationRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 160);
    out.push_str(HEADER);
    out.push('\n');
    for r in records {
        for id in [&r.item_id, &r.source_id, &r.run_id, &r.annotator_id] {
            push_plain(&mut out, id);
            out.push(',');
        }
        out.push(if r.labels.no_error { '1' } else { '0' });
        for code in ErrorCode::ALL {
            out.push(',');
            out.push(if r.labels.get(code) { '1' } else { '0' });
        }
        out.push(',');
        push_plain(&mut out, r.duplicate_of.as_deref().unwrap_or(""));
        out.push(',');
        push_quoted(&mut out, &r.source_text);
        out.push(',');
        push_quoted(&mut out, &r.simplified_text);
        out.push('\n');
    }
    out
}

pub fn write_collection<W: Write>(records: &[AnnotationRecord], mut w: W) -> std::io::Result<()> {
    w.write_all(collection_to_string(records).as_bytes())
}
