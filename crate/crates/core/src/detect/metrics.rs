//! Ranking metrics with fixed tie handling.
//!
//! AUROC gives half credit to tied positive/negative pairs. AUPRC (average
//! precision) treats a run of equal scores as one threshold.

use crate::measure::NotMeasurable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("score at position {index} is not finite")]
    NonFinite { index: usize },
    #[error(transparent)]
    NotMeasurable(#[from] NotMeasurable),
}

fn check(scores: &[f64], labels: &[bool]) -> Result<(usize, usize), MetricError> {
    if scores.len() != labels.len() {
        return Err(MetricError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if let Some(index) = scores.iter().position(|s| !s.is_finite()) {
        return Err(MetricError::NonFinite { index });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    Ok((pos, labels.len() - pos))
}

/// Index order by score, ascending.
fn ascending(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    idx
}

/// Runs of equal scores over a sorted index order.
fn tie_blocks<'a>(
    order: &'a [usize],
    scores: &'a [f64],
) -> impl Iterator<Item = &'a [usize]> + 'a {
    order.chunk_by(move |&a, &b| scores[a] == scores[b])
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half.
pub fn auroc(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let (p, n) = check(scores, labels)?;
    if p == 0 || n == 0 {
        return Err(NotMeasurable::new("labels contain a single class").into());
    }
    let order = ascending(scores);
    // twice the number of (positive, negative) wins, ties counting 1
    let mut doubled: u128 = 0;
    let mut neg_below: u128 = 0;
    for block in tie_blocks(&order, scores) {
        let pos_b = block.iter().filter(|&&i| labels[i]).count() as u128;
        let neg_b = block.len() as u128 - pos_b;
        doubled += 2 * pos_b * neg_below + pos_b * neg_b;
        neg_below += neg_b;
    }
    Ok(doubled as f64 / (2 * p as u128 * n as u128) as f64)
}

/// Average precision: the sum over thresholds of recall gain times
/// precision, one threshold per distinct score.
pub fn auprc(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let (p, _) = check(scores, labels)?;
    if p == 0 {
        return Err(NotMeasurable::new("labels contain no positives").into());
    }
    let mut order = ascending(scores);
    order.reverse();
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut ap = 0.0;
    for block in tie_blocks(&order, scores) {
        let pos_b = block.iter().filter(|&&i| labels[i]).count();
        tp += pos_b;
        seen += block.len();
        if pos_b > 0 {
            ap += (pos_b as f64 / p as f64) * (tp as f64 / seen as f64);
        }
    }
    Ok(ap)
}
