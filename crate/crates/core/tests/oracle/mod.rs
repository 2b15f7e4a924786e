//! Independent reference implementations used to cross-check the library.
//!
//! These are deliberately naive: per-fact boolean predicates instead of set
//! algebra, floating-point contingency tables instead of exact integer
//! formulas, and quadratic pair / threshold scans instead of sorted sweeps.

#![allow(dead_code)]

use errata_core::facts::{
    derive_information_errors, derive_simplification_sets, AnnotatedFactUniverse, Fact, FactId,
    FactSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// fact algebra

/// Membership flags of one fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactFlags {
    pub src: bool,
    pub gen: bool,
    pub topic: bool,
    pub truthful: bool,
    pub imp: bool,
    pub cont: bool,
}

impl FactFlags {
    fn from_bits(b: u8) -> Self {
        FactFlags {
            src: b & 1 != 0,
            gen: b & 2 != 0,
            topic: b & 4 != 0,
            truthful: b & 8 != 0,
            imp: b & 16 != 0,
            cont: b & 32 != 0,
        }
    }

    /// Important facts are true and on topic; source facts are true.
    pub fn valid(self) -> bool {
        (!self.imp || (self.truthful && self.topic)) && (!self.src || self.truthful)
    }
}

/// Every flag combination that satisfies the universe invariants.
pub fn valid_flag_combinations() -> Vec<FactFlags> {
    (0u8..64)
        .map(FactFlags::from_bits)
        .filter(|f| f.valid())
        .collect()
}

/// Membership of one fact in each derived set, evaluated pointwise from the
/// defining expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedMembership {
    pub topic_shift: bool,
    pub faithfulness: bool,
    pub factuality: bool,
    pub out_of_scope: bool,
    pub out_of_scope_new: bool,
    pub loss: bool,
    pub summarization: bool,
    pub clarification: bool,
    pub potential_clarification: bool,
}

pub fn expected(f: FactFlags) -> ExpectedMembership {
    let false_fact = !f.truthful;
    ExpectedMembership {
        topic_shift: f.gen && !f.topic,
        faithfulness: f.gen && f.topic && f.cont,
        factuality: f.gen && f.topic && false_fact && !f.cont,
        out_of_scope: f.gen && !f.imp,
        out_of_scope_new: f.gen && !f.imp && !f.src,
        loss: f.src && f.imp && !f.gen,
        summarization: f.src && !f.imp && !f.gen,
        clarification: f.gen && f.imp && !f.src,
        potential_clarification: f.imp && !f.src && !f.gen,
    }
}

pub struct FactOracleSummary {
    pub universes: u64,
    pub failures: Vec<String>,
}

fn build_universe(facts: &[(FactId, Fact)], flags: &[FactFlags]) -> AnnotatedFactUniverse {
    let mut u = AnnotatedFactUniverse::with_facts(facts[..flags.len()].iter().map(|(_, f)| f.clone()));
    for ((id, _), f) in facts.iter().zip(flags) {
        let sets: [(&mut FactSet, bool); 6] = [
            (&mut u.source, f.src),
            (&mut u.generation, f.gen),
            (&mut u.topic, f.topic),
            (&mut u.truthful, f.truthful),
            (&mut u.important, f.imp),
            (&mut u.contradicts_source, f.cont),
        ];
        for (set, on) in sets {
            if on {
                set.insert(id.clone());
            }
        }
    }
    u
}

fn check_universe(
    facts: &[(FactId, Fact)],
    flags: &[FactFlags],
) -> Result<(), String> {
    let u = build_universe(facts, flags);
    let info = derive_information_errors(&u).map_err(|e| e.to_string())?;
    let simp = derive_simplification_sets(&u).map_err(|e| e.to_string())?;
    for ((id, _), &f) in facts.iter().zip(flags) {
        let e = expected(f);
        let got = ExpectedMembership {
            topic_shift: info.topic_shift.contains(id),
            faithfulness: info.faithfulness.contains(id),
            factuality: info.factuality.contains(id),
            out_of_scope: simp.out_of_scope.contains(id),
            out_of_scope_new: simp.out_of_scope_new.contains(id),
            loss: simp.loss.contains(id),
            summarization: simp.summarization.contains(id),
            clarification: simp.clarification.contains(id),
            potential_clarification: simp.potential_clarification.contains(id),
        };
        if got != e {
            return Err(format!("{id}: flags {f:?}: expected {e:?}, got {got:?}"));
        }
    }
    // the derived sets may only mention facts of the universe
    let total: usize = [
        &info.topic_shift,
        &info.faithfulness,
        &info.factuality,
        &simp.out_of_scope,
        &simp.loss,
        &simp.summarization,
        &simp.clarification,
        &simp.potential_clarification,
    ]
    .iter()
    .map(|s| s.len())
    .sum();
    let expected_total: usize = flags
        .iter()
        .map(|&f| {
            let e = expected(f);
            [
                e.topic_shift,
                e.faithfulness,
                e.factuality,
                e.out_of_scope,
                e.loss,
                e.summarization,
                e.clarification,
                e.potential_clarification,
            ]
            .iter()
            .filter(|&&b| b)
            .count()
        })
        .sum();
    if total != expected_total {
        return Err(format!("set sizes differ: {total} vs {expected_total}"));
    }
    check_properties(&u, &info, &simp)
}

/// Disjointness and partition properties, checked with set operations on
/// the library's output.
pub fn check_properties(
    u: &AnnotatedFactUniverse,
    info: &errata_core::facts::InformationErrorSets,
    simp: &errata_core::facts::SimplificationSets,
) -> Result<(), String> {
    let disjoint = |a: &FactSet, b: &FactSet| a.is_disjoint(b);
    if !(disjoint(&info.topic_shift, &info.faithfulness)
        && disjoint(&info.topic_shift, &info.factuality)
        && disjoint(&info.faithfulness, &info.factuality))
    {
        return Err("information error sets overlap".into());
    }
    let union: FactSet = info
        .topic_shift
        .iter()
        .chain(&info.faithfulness)
        .chain(&info.factuality)
        .cloned()
        .collect();
    if !union.is_subset(&u.generation) {
        return Err("information errors outside F_gen".into());
    }
    let removed: FactSet = u.source.difference(&u.generation).cloned().collect();
    let ls: FactSet = simp.loss.union(&simp.summarization).cloned().collect();
    if !disjoint(&simp.loss, &simp.summarization) || ls != removed {
        return Err("loss/summarization do not partition F_src \\ F_gen".into());
    }
    let new_imp: FactSet = u.important.difference(&u.source).cloned().collect();
    let cp: FactSet = simp
        .clarification
        .union(&simp.potential_clarification)
        .cloned()
        .collect();
    if !disjoint(&simp.clarification, &simp.potential_clarification) || cp != new_imp {
        return Err("clarification sets do not partition F_imp \\ F_src".into());
    }
    Ok(())
}

/// Every valid flag assignment over universes of 0..=`max_facts` facts.
pub fn exhaustive_fact_check(max_facts: usize) -> FactOracleSummary {
    let combos = valid_flag_combinations();
    let facts: Vec<(FactId, Fact)> = (0..max_facts)
        .map(|i| {
            let f = Fact::new(&format!("f{i}"), &format!("s{i}"), "r", &format!("o{i}"));
            (f.id.clone(), f)
        })
        .collect();

    let mut universes = 0u64;
    let mut failures = Vec::new();
    for size in 0..=max_facts {
        if size == 0 {
            universes += 1;
            if let Err(e) = check_universe(&facts, &[]) {
                failures.push(e);
            }
            continue;
        }
        // split on the first fact's flags across threads
        let results: Vec<(u64, Vec<String>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = combos
                .iter()
                .map(|&first| {
                    let combos = &combos;
                    let facts = &facts;
                    scope.spawn(move || {
                        let mut n = 0u64;
                        let mut fails = Vec::new();
                        let rest = size - 1;
                        let count = combos.len().pow(rest as u32);
                        let mut flags = vec![first; size];
                        for mut k in 0..count {
                            for slot in flags.iter_mut().skip(1) {
                                *slot = combos[k % combos.len()];
                                k /= combos.len();
                            }
                            n += 1;
                            if let Err(e) = check_universe(facts, &flags) {
                                if fails.len() < 5 {
                                    fails.push(e);
                                }
                            }
                        }
                        (n, fails)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (n, f) in results {
            universes += n;
            failures.extend(f);
        }
    }
    FactOracleSummary {
        universes,
        failures,
    }
}

// ---------------------------------------------------------------------------
// agreement

/// Cohen's kappa from a floating-point 2×2 contingency table.
pub fn cohen_oracle(a: &[bool], b: &[bool]) -> f64 {
    let mut table = [[0f64; 2]; 2];
    for (&x, &y) in a.iter().zip(b) {
        table[x as usize][y as usize] += 1.0;
    }
    let n = a.len() as f64;
    let p_o = (table[0][0] + table[1][1]) / n;
    let mut p_e = 0.0;
    for (k, cells) in table.iter().enumerate() {
        let row = cells[0] + cells[1];
        let col = table[0][k] + table[1][k];
        p_e += (row / n) * (col / n);
    }
    if (1.0 - p_e).abs() < 1e-15 {
        return 1.0;
    }
    (p_o - p_e) / (1.0 - p_e)
}

/// Fleiss' kappa from per-item category counts, agreement counted over
/// ordered rater pairs.
pub fn fleiss_oracle(rows: &[Vec<bool>]) -> f64 {
    let big_n = rows.len() as f64;
    let n = rows[0].len();
    let mut p_bar = 0.0;
    let mut totals = [0f64; 2];
    for row in rows {
        let mut agreeing_pairs = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i != j && row[i] == row[j] {
                    agreeing_pairs += 1;
                }
            }
            totals[row[i] as usize] += 1.0;
        }
        p_bar += agreeing_pairs as f64 / (n * (n - 1)) as f64;
    }
    p_bar /= big_n;
    let p_e: f64 = totals
        .iter()
        .map(|t| (t / (big_n * n as f64)).powi(2))
        .sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return 1.0;
    }
    (p_bar - p_e) / (1.0 - p_e)
}

/// Two raters over 1..=60 items. Every fourth instance is heavily skewed
/// toward `true`, which exercises near-degenerate chance agreement.
pub fn random_rater_pair(rng: &mut ChaCha8Rng, case: usize) -> (Vec<bool>, Vec<bool>) {
    let n = rng.random_range(1..=60);
    let skew = if case.is_multiple_of(4) { 0.97 } else { 0.5 };
    let a = (0..n).map(|_| rng.random_bool(skew)).collect();
    let b = (0..n).map(|_| rng.random_bool(skew)).collect();
    (a, b)
}

/// 1..=12 items rated by 2..=6 raters, skewed like [`random_rater_pair`].
pub fn random_rating_rows(rng: &mut ChaCha8Rng, case: usize) -> Vec<Vec<bool>> {
    let items = rng.random_range(1..=12);
    let raters = rng.random_range(2..=6);
    let skew = if case.is_multiple_of(4) { 0.97 } else { 0.5 };
    (0..items)
        .map(|_| (0..raters).map(|_| rng.random_bool(skew)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// detection metrics

/// Fraction of (positive, negative) pairs ranked correctly, ties one half.
pub fn auroc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] && !labels[j] {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Step-wise area under the precision-recall curve: for each distinct
/// threshold from high to low, recompute precision and recall from scratch.
pub fn auprc_oracle(scores: &[f64], labels: &[bool]) -> f64 {
    let positives = labels.iter().filter(|&&l| l).count() as f64;
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut area = 0.0;
    let mut prev_recall = 0.0;
    for t in thresholds {
        let mut tp = 0.0;
        let mut predicted = 0.0;
        for (s, &l) in scores.iter().zip(labels) {
            if *s >= t {
                predicted += 1.0;
                if l {
                    tp += 1.0;
                }
            }
        }
        let recall = tp / positives;
        area += (recall - prev_recall) * (tp / predicted);
        prev_recall = recall;
    }
    area
}

/// Random scored instance of length 2..=200. Every third instance draws
/// scores from a handful of values so ties are common.
pub fn random_scored(rng: &mut ChaCha8Rng, case: usize) -> (Vec<f64>, Vec<bool>) {
    let n = rng.random_range(2..=200);
    let tie_heavy = case.is_multiple_of(3);
    let rate = rng.random_range(0.05..0.95);
    let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(rate)).collect();
    labels[0] = true;
    labels[1] = false;
    let scores = (0..n)
        .map(|_| {
            if tie_heavy {
                rng.random_range(0..5) as f64 / 4.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    (scores, labels)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
