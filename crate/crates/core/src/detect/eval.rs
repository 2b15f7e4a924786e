use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::metrics::{auprc, auroc, MetricError};
use super::scores::{Orientation, ScoreTable};
use crate::collection::AnnotationRecord;
use crate::ratio::Ratio;
use crate::table::{Align, TextTable};
use crate::taxonomy::{aggregate_categories, Category, ErrorCode, LabelVector};

/// What a detector is asked to find.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    AnyError,
    Category(Category),
    Code(ErrorCode),
}

impl Target {
    /// `any_error`, the four categories, then the fourteen codes.
    pub fn all() -> Vec<Target> {
        let mut out = vec![Target::AnyError];
        out.extend(Category::ALL.map(Target::Category));
        out.extend(ErrorCode::ALL.map(Target::Code));
        out
    }

    pub fn key(self) -> String {
        match self {
            Target::AnyError => "any_error".to_string(),
            Target::Category(c) => c.name().to_lowercase(),
            Target::Code(c) => c.id().to_string(),
        }
    }

    pub fn label(self) -> String {
        match self {
            Target::AnyError => "Any error".to_string(),
            Target::Category(c) => c.label(),
            Target::Code(c) => c.label(),
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Target::AnyError => Metric::Auroc,
            _ => Metric::Auprc,
        }
    }

    pub fn value(self, v: &LabelVector) -> bool {
        match self {
            Target::AnyError => v.any_error(),
            Target::Category(c) => aggregate_categories(v).get(c),
            Target::Code(c) => v.get(c),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for Target {
    type Err = String;

    /// Accepts `any_error`, a category name or letter, or a code id in
    /// either form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("any_error") || t.eq_ignore_ascii_case("any-error") {
            return Ok(Target::AnyError);
        }
        if let Ok(code) = t.parse::<ErrorCode>() {
            return Ok(Target::Code(code));
        }
        if let Ok(cat) = t.parse::<Category>() {
            return Ok(Target::Category(cat));
        }
        Err(format!("unknown target `{s}`"))
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Auroc,
    Auprc,
}

/// How several annotators' labels for one item become one gold label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldMode {
    /// Positive if any annotator flagged the target.
    #[default]
    Union,
    /// Positive if more than half of the annotators flagged it.
    Majority,
}

impl fmt::Display for GoldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoldMode::Union => "union",
            GoldMode::Majority => "majority",
        })
    }
}

impl FromStr for GoldMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "union" => Ok(GoldMode::Union),
            "majority" => Ok(GoldMode::Majority),
            _ => Err(format!("unknown gold mode `{s}` (expected union or majority)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("detector `{detector}`: {} item(s) without a score (first: {}), {} score(s) for unknown items (first: {})",
        missing.len(), missing.first().map_or("-", String::as_str),
        unknown.len(), unknown.first().map_or("-", String::as_str))]
    Unmatched {
        detector: String,
        missing: Vec<String>,
        unknown: Vec<String>,
    },
    #[error("collection has no scoreable items")]
    Empty,
    #[error("detector `{detector}`: {source}")]
    Metric {
        detector: String,
        source: MetricError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetResult {
    pub target: Target,
    pub metric: Metric,
    /// Absent when the target is not measurable on this data.
    pub value: Option<f64>,
    pub not_measurable: Option<String>,
    pub positives: u64,
    pub total: u64,
}

impl TargetResult {
    pub fn pct_true(&self) -> Option<String> {
        Ratio::percent(self.positives, self.total).map(|r| r.fixed(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub detector: String,
    pub orientation: Orientation,
    pub gold: GoldMode,
    pub items: u64,
    pub results: Vec<TargetResult>,
}

impl EvalReport {
    pub fn result(&self, target: Target) -> Option<&TargetResult> {
        self.results.iter().find(|r| r.target == target)
    }
}

/// Gold labels per non-probe item, in item-id order.
pub fn gold_labels(
    records: &[AnnotationRecord],
    targets: &[Target],
    mode: GoldMode,
) -> BTreeMap<String, Vec<bool>> {
    let mut votes: BTreeMap<&str, (usize, Vec<usize>)> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_probe()) {
        let entry = votes
            .entry(r.item_id.as_str())
            .or_insert_with(|| (0, vec![0; targets.len()]));
        entry.0 += 1;
        for (k, t) in targets.iter().enumerate() {
            entry.1[k] += t.value(&r.labels) as usize;
        }
    }
    votes
        .into_iter()
        .map(|(item, (raters, counts))| {
            let gold = counts
                .into_iter()
                .map(|c| match mode {
                    GoldMode::Union => c > 0,
                    GoldMode::Majority => 2 * c > raters,
                })
                .collect();
            (item.to_string(), gold)
        })
        .collect()
}

/// Scores one detector against the collection's gold labels. Probe records
/// are ignored; every remaining item must have exactly one score and every
/// score must belong to an item of the collection.
pub fn evaluate(
    table: &ScoreTable,
    records: &[AnnotationRecord],
    targets: &[Target],
    mode: GoldMode,
) -> Result<EvalReport, EvalError> {
    let gold = gold_labels(records, targets, mode);
    if gold.is_empty() {
        return Err(EvalError::Empty);
    }
    let oriented = table.error_oriented();
    let known: BTreeSet<&str> = records.iter().map(|r| r.item_id.as_str()).collect();
    let missing: Vec<String> = gold
        .keys()
        .filter(|id| !oriented.contains_key(id.as_str()))
        .cloned()
        .collect();
    let unknown: Vec<String> = oriented
        .keys()
        .filter(|id| !known.contains(*id))
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() || !unknown.is_empty() {
        return Err(EvalError::Unmatched {
            detector: table.detector_name.clone(),
            missing,
            unknown,
        });
    }

    let scores: Vec<f64> = gold.keys().map(|id| oriented[id.as_str()]).collect();
    let total = scores.len() as u64;
    let mut results = Vec::new();
    for (k, &target) in targets.iter().enumerate() {
        let labels: Vec<bool> = gold.values().map(|g| g[k]).collect();
        let positives = labels.iter().filter(|&&l| l).count() as u64;
        let metric = target.metric();
        let outcome = match metric {
            Metric::Auroc => auroc(&scores, &labels),
            Metric::Auprc => auprc(&scores, &labels),
        };
        let (value, not_measurable) = match outcome {
            Ok(v) => (Some(v), None),
            Err(MetricError::NotMeasurable(n)) => (None, Some(n.reason)),
            Err(source) => {
                return Err(EvalError::Metric {
                    detector: table.detector_name.clone(),
                    source,
                })
            }
        };
        results.push(TargetResult {
            target,
            metric,
            value,
            not_measurable,
            positives,
            total,
        });
    }
    Ok(EvalReport {
        detector: table.detector_name.clone(),
        orientation: table.orientation,
        gold: mode,
        items: total,
        results,
    })
}

fn fmt_value(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.decimals$}"))
}

/// Category AUPRC and any-error AUROC, one row per detector, preceded by
/// the `%True` and `#True` rows. Columns follow the requested targets.
pub fn render_greater(reports: &[EvalReport]) -> Option<String> {
    let first = reports.first()?;
    let cols: Vec<&TargetResult> = first
        .results
        .iter()
        .filter(|r| !matches!(r.target, Target::Code(_)))
        .collect();
    if cols.is_empty() {
        return None;
    }
    let mut header = vec![("Metric".to_string(), Align::Left)];
    for c in &cols {
        let name = match c.target {
            Target::AnyError => "Any error (AUROC)".to_string(),
            t => t.label(),
        };
        header.push((name, Align::Right));
    }
    let mut t = TextTable::new(header);
    let mut row = vec!["%True".to_string()];
    row.extend(cols.iter().map(|c| c.pct_true().unwrap_or_else(|| "-".into())));
    t.row(row);
    let mut row = vec!["#True".to_string()];
    row.extend(cols.iter().map(|c| c.positives.to_string()));
    t.row(row);
    for rep in reports {
        let mut row = vec![rep.detector.clone()];
        row.extend(
            cols.iter()
                .map(|c| fmt_value(rep.result(c.target).and_then(|r| r.value), 2)),
        );
        t.row(row);
    }
    Some(t.render())
}

/// Per-code AUPRC grouped under category headings, with counts.
pub fn render_codes(reports: &[EvalReport]) -> Option<String> {
    let first = reports.first()?;
    let codes: Vec<&TargetResult> = first
        .results
        .iter()
        .filter(|r| matches!(r.target, Target::Code(_)))
        .collect();
    if codes.is_empty() {
        return None;
    }
    let mut header = vec![
        ("Error Type".to_string(), Align::Left),
        ("#Total".to_string(), Align::Right),
        ("#True".to_string(), Align::Right),
        ("%True".to_string(), Align::Right),
    ];
    header.extend(reports.iter().map(|r| (r.detector.clone(), Align::Right)));
    let mut t = TextTable::new(header);
    let mut current: Option<Category> = None;
    for c in codes {
        let Target::Code(code) = c.target else {
            continue;
        };
        if current != Some(code.category()) {
            current = Some(code.category());
            t.row([format!("{} {}", code.category().letter(), code.category().name())]);
        }
        let mut row = vec![
            format!("  {}", code.label()),
            c.total.to_string(),
            c.positives.to_string(),
            c.pct_true().unwrap_or_else(|| "-".into()),
        ];
        row.extend(
            reports
                .iter()
                .map(|rep| fmt_value(rep.result(c.target).and_then(|r| r.value), 4)),
        );
        t.row(row);
    }
    Some(t.render())
}

/// The full text report: a header line naming the gold-label mode, then the
/// greater-category table and the per-code table for whichever targets
/// were requested.
pub fn render_eval(reports: &[EvalReport]) -> String {
    let Some(first) = reports.first() else {
        return String::new();
    };
    let mut out = format!("gold labels: {} ({} items)\n", first.gold, first.items);
    for part in [render_greater(reports), render_codes(reports)]
        .into_iter()
        .flatten()
    {
        out.push('\n');
        out.push_str(&part);
    }
    out
}
