use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::taxonomy::{validate_label_vector, LabelVector, LabelViolation};

/// One annotator's labels for one (source, simplification) item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub item_id: String,
    pub source_id: String,
    pub run_id: String,
    pub annotator_id: String,
    pub labels: LabelVector,
    /// Set on self-consistency probes: the item this row repeats.
    pub duplicate_of: Option<String>,
    pub source_text: String,
    pub simplified_text: String,
}

impl AnnotationRecord {
    pub fn is_probe(&self) -> bool {
        self.duplicate_of.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    Label { violation: LabelViolation },
    DuplicateKey,
    SelfDuplicate,
    DanglingDuplicateOf { target: String },
    DuplicateTextMismatch { target: String },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::Label { violation } => write!(f, "{violation}"),
            ViolationKind::DuplicateKey => f.write_str("duplicate (item_id, annotator_id)"),
            ViolationKind::SelfDuplicate => f.write_str("duplicate_of points at its own item"),
            ViolationKind::DanglingDuplicateOf { target } => {
                write!(f, "duplicate_of references unknown item `{target}`")
            }
            ViolationKind::DuplicateTextMismatch { target } => {
                write!(f, "duplicate_of `{target}` has different source or simplified text")
            }
        }
    }
}

/// A collection invariant broken by one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordViolation {
    /// Zero-based row index among data rows.
    pub row: usize,
    /// One-based line in the source file, when parsed from text.
    pub line: Option<u64>,
    pub item_id: String,
    pub annotator_id: String,
    pub kind: ViolationKind,
}

impl fmt::Display for RecordViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}")?,
            None => write!(f, "row {}", self.row + 1)?,
        }
        write!(
            f,
            " (item {}, annotator {}): {}",
            self.item_id, self.annotator_id, self.kind
        )
    }
}

/// Checks label invariants, key uniqueness and duplicate_of links.
pub fn validate_records(records: &[AnnotationRecord]) -> Vec<RecordViolation> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<RecordViolation>, row: usize, r: &AnnotationRecord, kind| {
        out.push(RecordViolation {
            row,
            line: None,
            item_id: r.item_id.clone(),
            annotator_id: r.annotator_id.clone(),
            kind,
        })
    };

    // texts of the first row carrying each item id
    let mut items: HashMap<&str, (&str, &str)> = HashMap::new();
    for r in records {
        items
            .entry(r.item_id.as_str())
            .or_insert((r.source_text.as_str(), r.simplified_text.as_str()));
    }

    let mut seen: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (row, r) in records.iter().enumerate() {
        for violation in validate_label_vector(&r.labels) {
            push(&mut out, row, r, ViolationKind::Label { violation });
        }
        if seen
            .insert((r.item_id.as_str(), r.annotator_id.as_str()), row)
            .is_some()
        {
            push(&mut out, row, r, ViolationKind::DuplicateKey);
        }
        if let Some(target) = &r.duplicate_of {
            if target == &r.item_id {
                push(&mut out, row, r, ViolationKind::SelfDuplicate);
            } else {
                match items.get(target.as_str()) {
                    None => push(
                        &mut out,
                        row,
                        r,
                        ViolationKind::DanglingDuplicateOf {
                            target: target.clone(),
                        },
                    ),
                    Some(&(src, simp)) if src != r.source_text || simp != r.simplified_text => {
                        push(
                            &mut out,
                            row,
                            r,
                            ViolationKind::DuplicateTextMismatch {
                                target: target.clone(),
                            },
                        )
                    }
                    Some(_) => {}
                }
            }
        }
    }
    out
}
