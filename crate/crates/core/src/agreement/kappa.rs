//! Cohen's and Fleiss' kappa over binary labels, in exact arithmetic.
//!
//! When chance agreement is total (every rating in one class), both kappas
//! are undefined; they are reported as 1, which is the only case where that
//! can happen since observed agreement is then also complete.

use crate::measure::NotMeasurable;
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AgreementError {
    #[error("label sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("item {item} has {found} ratings, expected {expected}")]
    Ragged {
        item: usize,
        expected: usize,
        found: usize,
    },
    #[error("at least 2 raters are required, found {0}")]
    TooFewRaters(usize),
    #[error(transparent)]
    NotMeasurable(#[from] NotMeasurable),
}

/// Cohen's kappa for two aligned binary label sequences.
pub fn cohen_kappa(a: &[bool], b: &[bool]) -> Result<Ratio, AgreementError> {
    if a.len() != b.len() {
        return Err(AgreementError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(NotMeasurable::new("no items").into());
    }
    let n = a.len() as i128;
    let (mut agree, mut a1, mut b1) = (0i128, 0i128, 0i128);
    for (&x, &y) in a.iter().zip(b) {
        agree += (x == y) as i128;
        a1 += x as i128;
        b1 += y as i128;
    }
    // kappa = (p_o - p_e) / (1 - p_e), scaled by n^2
    let chance = a1 * b1 + (n - a1) * (n - b1);
    let den = n * n - chance;
    if den == 0 {
        return Ok(Ratio::one());
    }
    Ok(Ratio::new(n * agree - chance, den))
}

/// An item × rater binary matrix with the same number of raters per item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMatrix {
    rows: Vec<Vec<bool>>,
    raters: usize,
}

impl RatingMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, AgreementError> {
        let raters = rows.first().map_or(0, Vec::len);
        if let Some((item, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != raters) {
            return Err(AgreementError::Ragged {
                item,
                expected: raters,
                found: row.len(),
            });
        }
        if !rows.is_empty() && raters < 2 {
            return Err(AgreementError::TooFewRaters(raters));
        }
        Ok(RatingMatrix { rows, raters })
    }

    pub fn items(&self) -> usize {
        self.rows.len()
    }

    pub fn raters(&self) -> usize {
        self.raters
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Ratings of one rater across all items.
    pub fn column(&self, rater: usize) -> Vec<bool> {
        self.rows.iter().map(|r| r[rater]).collect()
    }
}

/// Fleiss' kappa with two categories.
pub fn fleiss_kappa(m: &RatingMatrix) -> Result<Ratio, AgreementError> {
    if m.items() == 0 {
        return Err(NotMeasurable::new("no items").into());
    }
    let big_n = m.items() as i128;
    let n = m.raters() as i128;
    // s = sum over items and classes of n_ik (n_ik - 1); t = class totals
    let (mut s, mut t1) = (0i128, 0i128);
    for row in m.rows() {
        let ones = row.iter().filter(|&&x| x).count() as i128;
        let zeros = n - ones;
        s += ones * (ones - 1) + zeros * (zeros - 1);
        t1 += ones;
    }
    let t0 = big_n * n - t1;
    let sum_t2 = t1 * t1 + t0 * t0;
    let den = (n - 1) * (big_n * big_n * n * n - sum_t2);
    if den == 0 {
        return Ok(Ratio::one());
    }
    Ok(Ratio::new(s * big_n * n - sum_t2 * (n - 1), den))
}

/// Percentage of items on which every rater gave the same label.
pub fn unanimous_pct(m: &RatingMatrix) -> Result<Ratio, AgreementError> {
    let unanimous = m
        .rows()
        .iter()
        .filter(|r| r.iter().all(|&x| x == r[0]))
        .count();
    Ratio::percent(unanimous as u64, m.items() as u64)
        .ok_or_else(|| NotMeasurable::new("no items").into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cohen_hand_cases() {
        let t = [true, false, true, false];
        assert_eq!(cohen_kappa(&t, &t).unwrap(), Ratio::one());
        let a = [true, true, false, false];
        let b = [true, false, true, false];
        assert_eq!(cohen_kappa(&a, &b).unwrap(), Ratio::zero());
        let all = [true; 4];
        assert_eq!(cohen_kappa(&all, &all).unwrap(), Ratio::one());
        assert_eq!(
            cohen_kappa(&[true], &[true, false]),
            Err(AgreementError::LengthMismatch { left: 1, right: 2 })
        );
        assert!(matches!(
            cohen_kappa(&[], &[]),
            Err(AgreementError::NotMeasurable(_))
        ));
    }

    #[test]
    fn fleiss_hand_cases() {
        let m = RatingMatrix::new(vec![vec![true, false], vec![false, true]]).unwrap();
        assert_eq!(fleiss_kappa(&m).unwrap(), Ratio::from_integer(-1));

        let m = RatingMatrix::new(vec![vec![true; 3], vec![false; 3]]).unwrap();
        assert_eq!(fleiss_kappa(&m).unwrap(), Ratio::one());
        assert_eq!(unanimous_pct(&m).unwrap(), Ratio::from_integer(100));

        let m = RatingMatrix::new(vec![vec![false; 5]; 4]).unwrap();
        assert_eq!(fleiss_kappa(&m).unwrap(), Ratio::one());

        let m = RatingMatrix::new(vec![vec![true, true], vec![true, false]]).unwrap();
        assert_eq!(unanimous_pct(&m).unwrap(), Ratio::from_integer(50));
    }

    #[test]
    fn matrix_shape_errors() {
        assert_eq!(
            RatingMatrix::new(vec![vec![true, false], vec![true]]),
            Err(AgreementError::Ragged {
                item: 1,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            RatingMatrix::new(vec![vec![true]]),
            Err(AgreementError::TooFewRaters(1))
        );
        let empty = RatingMatrix::new(vec![]).unwrap();
        assert!(fleiss_kappa(&empty).is_err());
        assert!(unanimous_pct(&empty).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<bool>>> {
        (2usize..6, 1usize..15).prop_flat_map(|(raters, items)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), raters), items)
        })
    }

    proptest! {
        #[test]
        fn cohen_is_symmetric(pairs in prop::collection::vec(any::<(bool, bool)>(), 1..40)) {
            let (a, b): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
            prop_assert_eq!(cohen_kappa(&a, &b).unwrap(), cohen_kappa(&b, &a).unwrap());
        }

        #[test]
        fn kappas_are_bounded(rows in arb_matrix()) {
            let m = RatingMatrix::new(rows).unwrap();
            let k = fleiss_kappa(&m).unwrap();
            prop_assert!(k <= Ratio::one());
            prop_assert!(k >= Ratio::from_integer(-1));
            let c = cohen_kappa(&m.column(0), &m.column(1)).unwrap();
            prop_assert!(c <= Ratio::one() && c >= Ratio::from_integer(-1));
            let u = unanimous_pct(&m).unwrap();
            prop_assert!(u >= Ratio::zero() && u <= Ratio::from_integer(100));
        }

        #[test]
        fn full_unanimity_gives_fleiss_one(items in prop::collection::vec(any::<bool>(), 1..20), raters in 2usize..6) {
            let m = RatingMatrix::new(items.iter().map(|&x| vec![x; raters]).collect()).unwrap();
            prop_assert_eq!(unanimous_pct(&m).unwrap(), Ratio::from_integer(100));
            prop_assert_eq!(fleiss_kappa(&m).unwrap(), Ratio::one());
        }

        #[test]
        fn item_order_is_irrelevant(mut rows in arb_matrix()) {
            let m = RatingMatrix::new(rows.clone()).unwrap();
            rows.reverse();
            let r = RatingMatrix::new(rows).unwrap();
            prop_assert_eq!(fleiss_kappa(&m).unwrap(), fleiss_kappa(&r).unwrap());
            prop_assert_eq!(unanimous_pct(&m).unwrap(), unanimous_pct(&r).unwrap());
        }
    }
}
