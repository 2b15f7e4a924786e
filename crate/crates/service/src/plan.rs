//! Deterministic per-annotator task queues.
//!
//! The first `shared_pool_size` items go to every annotator (the agreement
//! subset). Each remaining item goes to `rater_count` annotators, dealt
//! round-robin. Each annotator then gets `round(probe_rate * n)` probes: hidden
//! repeats of items already in their queue, placed at a seeded random
//! position after the original.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ServiceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueEntry {
    /// Index into the item list.
    pub item: usize,
    pub is_probe: bool,
}

/// Item id under which a probe is recorded in the export.
pub fn probe_item_id(original: &str, annotator: &str) -> String {
    format!("{original}::probe-{annotator}")
}

fn annotator_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn build_queues(n_items: usize, cfg: &ServiceConfig) -> BTreeMap<String, Vec<QueueEntry>> {
    let annotators = &cfg.annotators;
    let a = annotators.len();
    let mut originals: Vec<Vec<usize>> = vec![Vec::new(); a];
    let shared = cfg.shared_pool_size.min(n_items);
    for item in 0..shared {
        for q in originals.iter_mut() {
            q.push(item);
        }
    }
    let per_item = cfg.rater_count.min(a);
    for (j, item) in (shared..n_items).enumerate() {
        for t in 0..per_item {
            originals[(j * per_item + t) % a].push(item);
        }
    }

    let mut out = BTreeMap::new();
    for (idx, (name, orig)) in annotators.iter().zip(originals).enumerate() {
        let mut rng = annotator_rng(cfg.seed, idx);
        let n = orig.len();
        let n_probes = ((cfg.probe_rate * n as f64).round() as usize).min(n);
        // gaps[g] holds probes placed just before original g (g == n: at the end)
        let mut gaps: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for p in rand::seq::index::sample(&mut rng, n, n_probes).into_vec() {
            let g = rng.random_range(p + 1..=n);
            gaps[g].push(orig[p]);
        }
        let mut queue = Vec::with_capacity(n + n_probes);
        for (g, probes) in gaps.into_iter().enumerate() {
            queue.extend(probes.into_iter().map(|item| QueueEntry {
                item,
                is_probe: true,
            }));
            if g < n {
                queue.push(QueueEntry {
                    item: orig[g],
                    is_probe: false,
                });
            }
        }
        out.insert(name.clone(), queue);
    }
    out
}
