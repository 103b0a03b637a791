use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ncfkit_bench::{sampled_structure, scrambled_table};
use ncfkit_core::canalyze::{canalyzing_triples, ncf_decompose};
use ncfkit_core::formulas::{average_sensitivity, conjecture_scan, count_ncf_total};
use ncfkit_core::{enumerate_ncf, AnfPoly};

fn bench_anf_transform(c: &mut Criterion) {
    let table = scrambled_table(16, 0xbeef);
    c.bench_function("anf_round_trip_n16", |b| {
        b.iter(|| {
            let poly = AnfPoly::from_truth_table(black_box(&table));
            black_box(poly.truth_table())
        })
    });
}

fn bench_canalyzing_triples(c: &mut Criterion) {
    let table = scrambled_table(16, 0xf00d);
    c.bench_function("canalyzing_triples_n16", |b| {
        b.iter(|| black_box(canalyzing_triples(black_box(&table))))
    });
}

fn bench_decompose(c: &mut Criterion) {
    let ncf = sampled_structure(16, 42).reconstruct();
    c.bench_function("decompose_ncf_n16", |b| b.iter(|| black_box(ncf_decompose(black_box(&ncf)))));
    let random = scrambled_table(16, 0xdead);
    c.bench_function("decompose_random_n16", |b| {
        b.iter(|| black_box(ncf_decompose(black_box(&random))))
    });
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate_all_n5", |b| {
        b.iter(|| black_box(enumerate_ncf(black_box(5), None).unwrap().count()))
    });
}

fn bench_formulas(c: &mut Criterion) {
    c.bench_function("count_total_n200", |b| b.iter(|| black_box(count_ncf_total(black_box(200)).unwrap())));
    let comp = sampled_structure(24, 7).composition().unwrap();
    c.bench_function("average_sensitivity_n24", |b| {
        b.iter(|| black_box(average_sensitivity(black_box(&comp))))
    });
}

fn bench_scan(c: &mut Criterion) {
    c.bench_function("conjecture_scan_n20", |b| {
        b.iter(|| black_box(conjecture_scan(black_box(20)).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_anf_transform,
    bench_canalyzing_triples,
    bench_decompose,
    bench_enumerate,
    bench_formulas,
    bench_scan
);
criterion_main!(benches);
