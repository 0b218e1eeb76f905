use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hermitian::counting::{count_brute_with, count_fiber_with, count_subgroup_with, Budgets};
use hermitian::{count_closed, CurveParams, Exec};

fn sequential_vs_parallel(c: &mut Criterion) {
    let budgets = Budgets::default();
    let params = CurveParams::new(2, 2, 1).unwrap();
    let mut group = c.benchmark_group("exec");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::new("brute", name), &exec, |b, &e| {
            b.iter(|| count_brute_with(&params, 10, &budgets, e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fiber", name), &exec, |b, &e| {
            b.iter(|| count_fiber_with(&params, 16, &budgets, e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("subgroup", name), &exec, |b, &e| {
            b.iter(|| count_subgroup_with(&params, 16, &budgets, e).unwrap())
        });
    }
    group.finish();
}

fn closed_vs_enumeration(c: &mut Criterion) {
    let budgets = Budgets::default();
    let params = CurveParams::new(2, 2, 1).unwrap();
    let mut group = c.benchmark_group("scaling");
    group.sample_size(10);
    for n in [8u64, 12, 16] {
        group.bench_with_input(BenchmarkId::new("fiber", n), &n, |b, &n| {
            b.iter(|| count_fiber_with(&params, n, &budgets, Exec::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("subgroup", n), &n, |b, &n| {
            b.iter(|| count_subgroup_with(&params, n, &budgets, Exec::default()).unwrap())
        });
    }
    for n in [8u64, 16, 1_000, 1_000_000] {
        group.bench_with_input(BenchmarkId::new("closed", n), &n, |b, &n| b.iter(|| count_closed(&params, n)));
    }
    group.finish();
}

criterion_group!(benches, sequential_vs_parallel, closed_vs_enumeration);
criterion_main!(benches);
