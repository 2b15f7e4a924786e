use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::record::AnnotationRecord;
use crate::measure::NotMeasurable;
use crate::ratio::Ratio;

/// Self-consistency of one annotator over the probe pairs present in a
/// collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRate {
    pub annotator: String,
    pub identical: u64,
    pub pairs: u64,
}

impl ConsistencyRate {
    pub fn rate(&self) -> Ratio {
        Ratio::new(self.identical as i128, self.pairs as i128)
    }

    /// Two decimals, half-up; whole values drop the fraction (`1`, `0`).
    pub fn render(&self) -> String {
        let r = self.rate();
        if r.denom() == 1 {
            r.numer().to_string()
        } else {
            r.fixed(2)
        }
    }
}

/// A probe pair is a record by `annotator` with `duplicate_of = Some(x)` and
/// the same annotator's record for item `x`. The rate is the fraction of
/// pairs whose full label vectors are identical.
pub fn consistency_rate(
    records: &[AnnotationRecord],
    annotator: &str,
) -> Result<ConsistencyRate, NotMeasurable> {
    let own: HashMap<&str, &AnnotationRecord> = records
        .iter()
        .filter(|r| r.annotator_id == annotator)
        .map(|r| (r.item_id.as_str(), r))
        .collect();
    let mut identical = 0;
    let mut pairs = 0;
    for r in records.iter().filter(|r| r.annotator_id == annotator) {
        let Some(orig) = r.duplicate_of.as_deref().and_then(|id| own.get(id)) else {
            continue;
        };
        pairs += 1;
        if orig.labels == r.labels {
            identical += 1;
        }
    }
    if pairs == 0 {
        return Err(NotMeasurable::new(format!(
            "annotator `{annotator}` has no duplicate pairs"
        )));
    }
    Ok(ConsistencyRate {
        annotator: annotator.to_string(),
        identical,
        pairs,
    })
}

/// Rates for every annotator in the collection, in annotator-id order.
pub fn consistency_rates(
    records: &[AnnotationRecord],
) -> BTreeMap<String, Result<ConsistencyRate, NotMeasurable>> {
    let annotators: BTreeSet<&str> = records.iter().map(|r| r.annotator_id.as_str()).collect();
    annotators
        .into_iter()
        .map(|a| (a.to_string(), consistency_rate(records, a)))
        .collect()
}
