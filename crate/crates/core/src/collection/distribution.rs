use serde::{Deserialize, Serialize};

use super::record::AnnotationRecord;
use crate::ratio::Ratio;
use crate::table::{Align, TextTable};
use crate::taxonomy::{aggregate_categories, Category, ErrorCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    NoError,
    Category,
    Code,
    AnyError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionRow {
    /// Machine key: `no_error`, a category name in lower case, a code id, or
    /// `any_error`.
    pub key: String,
    pub label: String,
    pub kind: RowKind,
    pub total: u64,
    #[serde(rename = "true")]
    pub true_count: u64,
    #[serde(rename = "false")]
    pub false_count: u64,
    /// Two decimals, half-up. Absent when `total` is zero.
    pub pct_true: Option<String>,
}

impl DistributionRow {
    fn new(key: String, label: String, kind: RowKind, total: u64, true_count: u64) -> Self {
        DistributionRow {
            key,
            label,
            kind,
            total,
            true_count,
            false_count: total - true_count,
            pct_true: Ratio::percent(true_count, total).map(|p| p.fixed(2)),
        }
    }
}

/// Per-label counts in the layout of the error type distribution table:
/// no error first, then each category followed by its codes, then any error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub records: u64,
    pub rows: Vec<DistributionRow>,
}

impl DistributionReport {
    pub fn row(&self, key: &str) -> Option<&DistributionRow> {
        self.rows.iter().find(|r| r.key == key)
    }

    pub fn render(&self) -> String {
        let mut t = TextTable::new([
            ("Error Label", Align::Left),
            ("#Total", Align::Right),
            ("#True", Align::Right),
            ("#False", Align::Right),
            ("%True", Align::Right),
        ]);
        for r in &self.rows {
            let label = match r.kind {
                RowKind::Code => format!("  {}", r.label),
                _ => r.label.clone(),
            };
            t.row([
                label,
                r.total.to_string(),
                r.true_count.to_string(),
                r.false_count.to_string(),
                r.pct_true.clone().unwrap_or_else(|| "-".to_string()),
            ]);
        }
        t.render()
    }
}

pub fn distribution(records: &[AnnotationRecord]) -> DistributionReport {
    let total = records.len() as u64;
    let mut no_error = 0u64;
    let mut any_error = 0u64;
    let mut cats = [0u64; 4];
    let mut codes = [0u64; 14];
    for r in records {
        if r.labels.no_error {
            no_error += 1;
        }
        let agg = aggregate_categories(&r.labels);
        if agg.any_error {
            any_error += 1;
        }
        for c in Category::ALL {
            cats[c.index()] += agg.get(c) as u64;
        }
        for code in r.labels.flagged() {
            codes[code.index()] += 1;
        }
    }

    let mut rows = vec![DistributionRow::new(
        "no_error".into(),
        "No error".into(),
        RowKind::NoError,
        total,
        no_error,
    )];
    for c in Category::ALL {
        rows.push(DistributionRow::new(
            c.name().to_lowercase(),
            c.label(),
            RowKind::Category,
            total,
            cats[c.index()],
        ));
        for code in c.codes() {
            rows.push(DistributionRow::new(
                code.id().into(),
                code.label(),
                RowKind::Code,
                total,
                codes[code.index()],
            ));
        }
    }
    rows.push(DistributionRow::new(
        "any_error".into(),
        "Any error".into(),
        RowKind::AnyError,
        total,
        any_error,
    ));
    DistributionReport {
        records: total,
        rows,
    }
}

/// Convenience lookup for one code's row.
pub fn code_row(report: &DistributionReport, code: ErrorCode) -> &DistributionRow {
    report.row(code.id()).expect("every code has a row")
}
