//! Deterministic synthetic collections and score tables.
//!
//! The released annotations are not bundled, so these generators stand in
//! for them: one collection reproduces the reference label counts exactly,
//! one mimics the shared agreement subset (104 items, five raters, eight
//! probes each), and score tables are drawn around the gold labels.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collection::AnnotationRecord;
use crate::detect::{gold_labels, GoldMode, Orientation, ScoreTable, Target};
use crate::taxonomy::{ErrorCode, LabelVector};

pub const REFERENCE_TOTAL: usize = 2659;
pub const REFERENCE_NO_ERROR: usize = 820;

/// True counts per code in the reference distribution.
pub const REFERENCE_CODE_COUNTS: [(ErrorCode, usize); 14] = [
    (ErrorCode::A1, 142),
    (ErrorCode::A2, 191),
    (ErrorCode::A3, 23),
    (ErrorCode::A4, 241),
    (ErrorCode::A5, 112),
    (ErrorCode::B1, 47),
    (ErrorCode::B2, 96),
    (ErrorCode::C1, 23),
    (ErrorCode::C2, 360),
    (ErrorCode::C3, 152),
    (ErrorCode::D1_1, 306),
    (ErrorCode::D1_2, 136),
    (ErrorCode::D2_1, 520),
    (ErrorCode::D2_2, 418),
];

const REFERENCE_ANNOTATORS: [&str; 10] = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"];

fn record(
    item_id: String,
    source: usize,
    run: usize,
    annotator: &str,
    labels: LabelVector,
) -> AnnotationRecord {
    AnnotationRecord {
        item_id,
        source_id: format!("src-{source:03}"),
        run_id: format!("run-{run}"),
        annotator_id: annotator.to_string(),
        labels,
        duplicate_of: None,
        source_text: format!("Source passage {source} describing a scientific finding."),
        simplified_text: format!("Simplified passage {source} from system {run}."),
    }
}

/// A collection whose per-label true counts match the reference
/// distribution exactly (2,659 records, 820 without error).
///
/// Error records receive code flags by walking the codes in canonical order
/// and dealing each code's count cyclically over the error records, so no
/// record gets the same code twice and every error record gets at least one
/// code.
pub fn reference_collection() -> Vec<AnnotationRecord> {
    let errors = REFERENCE_TOTAL - REFERENCE_NO_ERROR;
    let mut labels = vec![LabelVector::default(); errors];
    let mut cursor = 0;
    for (code, count) in REFERENCE_CODE_COUNTS {
        for _ in 0..count {
            labels[cursor % errors].set(code, true);
            cursor += 1;
        }
    }
    debug_assert!(cursor >= errors);

    let all = std::iter::repeat_n(LabelVector::no_error(), REFERENCE_NO_ERROR).chain(labels);
    // interleave so clean and flagged records are spread over annotators
    let mut all: Vec<LabelVector> = all.collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(2659));
    all.into_iter()
        .enumerate()
        .map(|(i, l)| {
            record(
                format!("item-{i:04}"),
                i / 8,
                i % 8,
                REFERENCE_ANNOTATORS[i % REFERENCE_ANNOTATORS.len()],
                l,
            )
        })
        .collect()
}

fn random_labels(rng: &mut ChaCha8Rng) -> LabelVector {
    if rng.random_bool(0.35) {
        return LabelVector::no_error();
    }
    let n = rng.random_range(1..=3);
    let codes: Vec<ErrorCode> = ErrorCode::ALL
        .choose_multiple(rng, n)
        .copied()
        .collect();
    LabelVector::with_codes(&codes)
}

pub const AGREEMENT_ITEMS: usize = 104;
pub const AGREEMENT_RATERS: [&str; 5] = ["A", "B", "C", "D", "E"];
pub const AGREEMENT_PROBES: usize = 8;

/// A shared subset in which every item is labeled by the same five raters,
/// plus [`AGREEMENT_PROBES`] hidden repeats per rater linked by
/// `duplicate_of`.
pub fn agreement_collection(seed: u64) -> Vec<AnnotationRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let latent: Vec<LabelVector> = (0..AGREEMENT_ITEMS)
        .map(|_| random_labels(&mut rng))
        .collect();
    let mut out = Vec::new();
    for (i, truth) in latent.iter().enumerate() {
        for rater in AGREEMENT_RATERS {
            let labels = if rng.random_bool(0.7) {
                *truth
            } else {
                random_labels(&mut rng)
            };
            out.push(record(format!("shared-{i:03}"), i, i % 4, rater, labels));
        }
    }
    for rater in AGREEMENT_RATERS {
        let picks = rand::seq::index::sample(&mut rng, AGREEMENT_ITEMS, AGREEMENT_PROBES);
        for i in picks.into_iter() {
            let original = out
                .iter()
                .find(|r| r.item_id == format!("shared-{i:03}") && r.annotator_id == rater)
                .expect("original present")
                .clone();
            let labels = if rng.random_bool(0.8) {
                original.labels
            } else {
                random_labels(&mut rng)
            };
            out.push(AnnotationRecord {
                item_id: format!("shared-{i:03}::probe-{rater}"),
                labels,
                duplicate_of: Some(original.item_id.clone()),
                ..original
            });
        }
    }
    out
}

/// Scores loosely correlated with the union gold any-error label: the gold
/// label shifts a uniform draw by `signal`. Scores are rounded to 4
/// decimals so written files are short and stable.
pub fn synthetic_scores(
    records: &[AnnotationRecord],
    detector_name: &str,
    orientation: Orientation,
    signal: f64,
    seed: u64,
) -> ScoreTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sign = match orientation {
        Orientation::HigherMeansError => 1.0,
        Orientation::HigherMeansQuality => -1.0,
    };
    let scores = gold_labels(records, &[Target::AnyError], GoldMode::Union)
        .into_iter()
        .map(|(id, gold)| {
            let raw = rng.random::<f64>() + if gold[0] { signal } else { 0.0 };
            (id, sign * (raw * 1e4).round() / 1e4)
        })
        .collect();
    ScoreTable {
        detector_name: detector_name.to_string(),
        orientation,
        scores,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{consistency_rate, validate_records};

    #[test]
    fn reference_collection_counts() {
        let recs = reference_collection();
        assert_eq!(recs.len(), REFERENCE_TOTAL);
        assert!(validate_records(&recs).is_empty());
        assert_eq!(recs.iter().filter(|r| r.labels.no_error).count(), REFERENCE_NO_ERROR);
        for (code, n) in REFERENCE_CODE_COUNTS {
            assert_eq!(recs.iter().filter(|r| r.labels.get(code)).count(), n, "{code}");
        }
        assert_eq!(reference_collection(), recs);
    }

    #[test]
    fn agreement_collection_shape() {
        let recs = agreement_collection(7);
        assert_eq!(recs.len(), AGREEMENT_ITEMS * 5 + AGREEMENT_PROBES * 5);
        assert!(validate_records(&recs).is_empty());
        for rater in AGREEMENT_RATERS {
            let rate = consistency_rate(&recs, rater).unwrap();
            assert_eq!(rate.pairs, AGREEMENT_PROBES as u64);
        }
        assert_eq!(agreement_collection(7), recs);
    }

    #[test]
    fn synthetic_scores_cover_items() {
        let recs = agreement_collection(1);
        let t = synthetic_scores(&recs, "toy", Orientation::HigherMeansQuality, 0.5, 3);
        assert_eq!(t.scores.len(), AGREEMENT_ITEMS);
        assert!(t.scores.values().all(|v| *v <= 0.0));
    }
}
