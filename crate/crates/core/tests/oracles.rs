mod oracle;

use std::time::Instant;

use errata_core::agreement::{cohen_kappa, fleiss_kappa, RatingMatrix};
use errata_core::detect::{auprc, auroc};
use errata_core::Ratio;
use rand::Rng;

#[test]
fn valid_flag_combinations_per_fact() {
    assert_eq!(oracle::valid_flag_combinations().len(), 32);
}

#[test]
fn fact_algebra_matches_pointwise_evaluation_exhaustively() {
    let start = Instant::now();
    let summary = oracle::exhaustive_fact_check(4);
    let elapsed = start.elapsed();
    assert!(summary.failures.is_empty(), "{:#?}", summary.failures);
    // 1 + 32 + 32^2 + 32^3 + 32^4
    assert_eq!(summary.universes, 1_082_401);
    eprintln!("{} universes in {:?}", summary.universes, elapsed);
}

#[test]
fn cohen_matches_contingency_oracle() {
    let mut rng = oracle::rng(11);
    for case in 0..1000 {
        let (a, b) = oracle::random_rater_pair(&mut rng, case);
        let got = cohen_kappa(&a, &b).unwrap().to_f64();
        let want = oracle::cohen_oracle(&a, &b);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn fleiss_matches_contingency_oracle() {
    let mut rng = oracle::rng(12);
    for case in 0..1000 {
        let rows = oracle::random_rating_rows(&mut rng, case);
        let got = fleiss_kappa(&RatingMatrix::new(rows.clone()).unwrap())
            .unwrap()
            .to_f64();
        let want = oracle::fleiss_oracle(&rows);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn complete_agreement_gives_exactly_one() {
    let all = vec![true; 9];
    assert_eq!(cohen_kappa(&all, &all).unwrap(), Ratio::one());
    let m = RatingMatrix::new(vec![vec![false; 5]; 7]).unwrap();
    assert_eq!(fleiss_kappa(&m).unwrap(), Ratio::one());
}

#[test]
fn two_rater_fleiss_shares_the_contingency_table_with_cohen() {
    // Same observed agreement; chance terms use pooled marginals for Fleiss
    // and per-rater marginals for Cohen. They coincide here because both
    // raters flag four of six items, and differ below.
    let a = [true, true, true, false, false, true];
    let b = [true, false, true, false, true, true];
    let rows: Vec<Vec<bool>> = a.iter().zip(&b).map(|(&x, &y)| vec![x, y]).collect();
    let fleiss = fleiss_kappa(&RatingMatrix::new(rows.clone()).unwrap()).unwrap();
    let cohen = cohen_kappa(&a, &b).unwrap();
    assert!((fleiss.to_f64() - oracle::fleiss_oracle(&rows)).abs() < 1e-12);
    assert!((cohen.to_f64() - oracle::cohen_oracle(&a, &b)).abs() < 1e-12);
    // p_o = 4/6; Cohen p_e = (4*4 + 2*2)/36, Fleiss p_e = (8/12)^2 + (4/12)^2
    assert_eq!(cohen, Ratio::new(1, 4));
    assert_eq!(fleiss, Ratio::new(1, 4));

    let a = [true, true, true, true, false, false];
    let b = [true, true, false, false, false, false];
    let rows: Vec<Vec<bool>> = a.iter().zip(&b).map(|(&x, &y)| vec![x, y]).collect();
    let fleiss = fleiss_kappa(&RatingMatrix::new(rows.clone()).unwrap()).unwrap();
    let cohen = cohen_kappa(&a, &b).unwrap();
    assert!((fleiss.to_f64() - oracle::fleiss_oracle(&rows)).abs() < 1e-12);
    assert!((cohen.to_f64() - oracle::cohen_oracle(&a, &b)).abs() < 1e-12);
    assert_ne!(fleiss, cohen);
}

#[test]
fn auroc_matches_pair_counting() {
    let mut rng = oracle::rng(21);
    for case in 0..1000 {
        let (s, l) = oracle::random_scored(&mut rng, case);
        let got = auroc(&s, &l).unwrap();
        let want = oracle::auroc_oracle(&s, &l);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn auprc_matches_stepwise_pr_area() {
    let mut rng = oracle::rng(22);
    for case in 0..1000 {
        let (s, l) = oracle::random_scored(&mut rng, case);
        let got = auprc(&s, &l).unwrap();
        let want = oracle::auprc_oracle(&s, &l);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn hand_computed_metric_cases() {
    let s = [0.9, 0.8, 0.3, 0.2];
    assert_eq!(auroc(&s, &[true, false, true, false]).unwrap(), 0.75);
    assert_eq!(oracle::auroc_oracle(&s, &[true, false, true, false]), 0.75);
    let ap = auprc(&[0.9, 0.8, 0.3], &[true, false, true]).unwrap();
    assert_eq!(format!("{ap:.4}"), "0.8333");
    assert!((ap - oracle::auprc_oracle(&[0.9, 0.8, 0.3], &[true, false, true])).abs() < 1e-15);
}

#[test]
fn random_detector_auprc_is_near_positive_rate() {
    let mut rng = oracle::rng(31);
    let n = 10_000;
    for rate in [0.05, 0.2, 0.5] {
        let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(rate)).collect();
        let scores: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let observed = labels.iter().filter(|&&l| l).count() as f64 / n as f64;
        let ap = auprc(&scores, &labels).unwrap();
        assert!((ap - observed).abs() < 0.05, "rate {rate}: ap {ap}");
    }
}
