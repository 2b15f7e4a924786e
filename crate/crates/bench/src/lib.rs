//! Seeded inputs shared by the benchmarks.

use errata_core::facts::{AnnotatedFactUniverse, Fact, FactId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` scores with roughly 30% positives; a quarter of the scores repeat.
pub fn scored(n: usize, seed: u64) -> (Vec<f64>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.3)).collect();
    let scores = labels
        .iter()
        .map(|&l| {
            let s: f64 = rng.random::<f64>() + if l { 0.3 } else { 0.0 };
            if rng.random_bool(0.25) {
                (s * 10.0).round() / 10.0
            } else {
                s
            }
        })
        .collect();
    (scores, labels)
}

/// `items` x `raters` binary ratings.
pub fn ratings(items: usize, raters: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..items)
        .map(|_| (0..raters).map(|_| rng.random_bool(0.4)).collect())
        .collect()
}

/// A valid universe of `n` facts with random set memberships.
pub fn universe(n: usize, seed: u64) -> AnnotatedFactUniverse {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facts = (0..n).map(|i| Fact::new(&format!("f{i}"), &format!("s{}", i % 17), "rel", &format!("o{i}")));
    let mut u = AnnotatedFactUniverse::with_facts(facts);
    for i in 0..n {
        let id = FactId::new(format!("f{i}"));
        let truthful = rng.random_bool(0.8);
        let topic = rng.random_bool(0.8);
        if truthful {
            u.truthful.insert(id.clone());
        }
        if topic {
            u.topic.insert(id.clone());
        }
        if truthful && topic && rng.random_bool(0.5) {
            u.important.insert(id.clone());
        }
        if truthful && rng.random_bool(0.5) {
            u.source.insert(id.clone());
        } else {
            u.generation.insert(id.clone());
            if rng.random_bool(0.2) {
                u.contradicts_source.insert(id);
            }
        }
    }
    u
}
