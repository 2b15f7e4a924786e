use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use errata_bench::{ratings, scored, universe};
use errata_core::agreement::{cohen_kappa, fleiss_kappa, RatingMatrix};
use errata_core::collection::{distribution, parse_collection, collection_to_string};
use errata_core::detect::{auprc, auroc};
use errata_core::facts::{derive_information_errors, derive_simplification_sets};
use errata_core::fixtures::reference_collection;

fn metrics(c: &mut Criterion) {
    let mut g = c.benchmark_group("metrics");
    for n in [1_000, 100_000] {
        let (s, l) = scored(n, 1);
        g.bench_with_input(BenchmarkId::new("auroc", n), &n, |b, _| {
            b.iter(|| auroc(black_box(&s), black_box(&l)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("auprc", n), &n, |b, _| {
            b.iter(|| auprc(black_box(&s), black_box(&l)).unwrap())
        });
    }
    g.finish();
}

fn kappa(c: &mut Criterion) {
    let rows = ratings(2_659, 5, 2);
    let a: Vec<bool> = rows.iter().map(|r| r[0]).collect();
    let b: Vec<bool> = rows.iter().map(|r| r[1]).collect();
    let m = RatingMatrix::new(rows).unwrap();
    c.bench_function("cohen_kappa/2659", |bench| {
        bench.iter(|| cohen_kappa(black_box(&a), black_box(&b)).unwrap())
    });
    c.bench_function("fleiss_kappa/2659x5", |bench| {
        bench.iter(|| fleiss_kappa(black_box(&m)).unwrap())
    });
}

fn facts(c: &mut Criterion) {
    let u = universe(500, 3);
    c.bench_function("derive_information_errors/500", |b| {
        b.iter(|| derive_information_errors(black_box(&u)).unwrap())
    });
    c.bench_function("derive_simplification_sets/500", |b| {
        b.iter(|| derive_simplification_sets(black_box(&u)).unwrap())
    });
}

fn collection(c: &mut Criterion) {
    let records = reference_collection();
    let text = collection_to_string(&records);
    c.bench_function("distribution/reference", |b| {
        b.iter(|| distribution(black_box(&records)))
    });
    c.bench_function("parse_collection/reference", |b| {
        b.iter(|| parse_collection(black_box(text.as_bytes())).unwrap())
    });
}

criterion_group!(benches, metrics, kappa, facts, collection);
criterion_main!(benches);
