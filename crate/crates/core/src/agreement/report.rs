use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::kappa::{cohen_kappa, fleiss_kappa, unanimous_pct, AgreementError, RatingMatrix};
use crate::collection::AnnotationRecord;
use crate::measure::NotMeasurable;
use crate::ratio::{serialize_f64, Ratio};
use crate::table::{Align, TextTable};
use crate::taxonomy::{aggregate_categories, Category, LabelVector};

/// A row of the agreement table: the raw `no_error` flag or one greater
/// category (any of its codes flagged).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementClass {
    NoError,
    Fluency,
    Alignment,
    Information,
    Simplification,
}

impl AgreementClass {
    pub const ALL: [AgreementClass; 5] = [
        AgreementClass::NoError,
        AgreementClass::Fluency,
        AgreementClass::Alignment,
        AgreementClass::Information,
        AgreementClass::Simplification,
    ];

    pub fn category(self) -> Option<Category> {
        match self {
            AgreementClass::NoError => None,
            AgreementClass::Fluency => Some(Category::Fluency),
            AgreementClass::Alignment => Some(Category::Alignment),
            AgreementClass::Information => Some(Category::Information),
            AgreementClass::Simplification => Some(Category::Simplification),
        }
    }

    pub fn label(self) -> String {
        match self.category() {
            None => "No error".to_string(),
            Some(c) => c.label(),
        }
    }

    pub fn value(self, v: &LabelVector) -> bool {
        match self.category() {
            None => v.no_error,
            Some(c) => aggregate_categories(v).get(c),
        }
    }
}

impl fmt::Display for AgreementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for AgreementClass {
    type Err = String;

    /// Accepts `no_error` or a category name, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("no_error") {
            return Ok(AgreementClass::NoError);
        }
        AgreementClass::ALL
            .into_iter()
            .find(|c| c.category().is_some_and(|cat| cat.name().eq_ignore_ascii_case(s)))
            .ok_or_else(|| {
                format!("unknown class `{s}` (expected no_error, fluency, alignment, information or simplification)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairKappa {
    pub raters: (String, String),
    #[serde(serialize_with = "serialize_f64")]
    pub kappa: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassAgreement {
    pub class: AgreementClass,
    #[serde(serialize_with = "serialize_f64")]
    pub fleiss_kappa: Ratio,
    #[serde(serialize_with = "serialize_f64")]
    pub unanimous_pct: Ratio,
    /// One entry per rater pair, in lexicographic pair order.
    pub cohen: Vec<PairKappa>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub raters: Vec<String>,
    pub items: usize,
    /// Non-probe items left out because their rater set differs from the
    /// selected one.
    pub excluded_items: usize,
    pub classes: Vec<ClassAgreement>,
}

impl AgreementReport {
    pub fn class(&self, class: AgreementClass) -> Option<&ClassAgreement> {
        self.classes.iter().find(|c| c.class == class)
    }

    /// Error class, Fleiss' kappa, unanimous percentage, then one Cohen's
    /// kappa column per rater pair. Kappas use 2 decimals, unanimity 1.
    pub fn render(&self) -> String {
        let mut header = vec![
            ("Error Class".to_string(), Align::Left),
            ("Fleiss' κ".to_string(), Align::Right),
            ("Unanimous %".to_string(), Align::Right),
        ];
        if let Some(first) = self.classes.first() {
            for p in &first.cohen {
                header.push((format!("{}-{}", p.raters.0, p.raters.1), Align::Right));
            }
        }
        let mut t = TextTable::new(header);
        for c in &self.classes {
            let mut row = vec![
                c.class.label(),
                c.fleiss_kappa.fixed(2),
                c.unanimous_pct.fixed(1),
            ];
            row.extend(c.cohen.iter().map(|p| p.kappa.fixed(2)));
            t.row(row);
        }
        t.render()
    }
}

/// Picks the rater set shared by the most non-probe items (ties: more
/// raters, then the lexicographically smallest set) among sets with at
/// least two raters.
fn select_rater_group(records: &[AnnotationRecord]) -> Option<(Vec<String>, Vec<String>, usize)> {
    let mut by_item: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_probe()) {
        by_item
            .entry(r.item_id.as_str())
            .or_default()
            .insert(r.annotator_id.as_str());
    }
    let mut groups: BTreeMap<&BTreeSet<&str>, Vec<&str>> = BTreeMap::new();
    for (item, raters) in &by_item {
        groups.entry(raters).or_default().push(item);
    }
    let best = groups
        .iter()
        .filter(|(raters, _)| raters.len() >= 2)
        .min_by(|(ra, ia), (rb, ib)| {
            ib.len()
                .cmp(&ia.len())
                .then(rb.len().cmp(&ra.len()))
                .then(ra.cmp(rb))
        })?;
    let raters = best.0.iter().map(|s| s.to_string()).collect();
    let items = best.1.iter().map(|s| s.to_string()).collect();
    Some((raters, items, by_item.len() - best.1.len()))
}

/// Agreement over the largest group of items that share one rater set.
/// Probe records are ignored.
pub fn agreement_report(
    records: &[AnnotationRecord],
    classes: &[AgreementClass],
) -> Result<AgreementReport, AgreementError> {
    let Some((raters, items, excluded)) = select_rater_group(records) else {
        let distinct: BTreeSet<&str> = records.iter().map(|r| r.annotator_id.as_str()).collect();
        return Err(if distinct.len() < 2 {
            AgreementError::TooFewRaters(distinct.len())
        } else {
            NotMeasurable::new("no item is rated by two or more annotators").into()
        });
    };

    let lookup: BTreeMap<(&str, &str), &LabelVector> = records
        .iter()
        .filter(|r| !r.is_probe())
        .map(|r| ((r.item_id.as_str(), r.annotator_id.as_str()), &r.labels))
        .collect();
    // labels[item][rater]
    let labels: Vec<Vec<&LabelVector>> = items
        .iter()
        .map(|item| {
            raters
                .iter()
                .map(|rater| lookup[&(item.as_str(), rater.as_str())])
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    for &class in classes {
        let rows: Vec<Vec<bool>> = labels
            .iter()
            .map(|row| row.iter().map(|v| class.value(v)).collect())
            .collect();
        let m = RatingMatrix::new(rows)?;
        let mut cohen = Vec::new();
        for i in 0..raters.len() {
            for j in i + 1..raters.len() {
                cohen.push(PairKappa {
                    raters: (raters[i].clone(), raters[j].clone()),
                    kappa: cohen_kappa(&m.column(i), &m.column(j))?,
                });
            }
        }
        out.push(ClassAgreement {
            class,
            fleiss_kappa: fleiss_kappa(&m)?,
            unanimous_pct: unanimous_pct(&m)?,
            cohen,
        });
    }
    Ok(AgreementReport {
        raters,
        items: items.len(),
        excluded_items: excluded,
        classes: out,
    })
}
