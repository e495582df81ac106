use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use annealab::spectrum::flip_symmetric_operator;
use annealab::{
    build_ising, build_transverse, gap_profile, interpolate, propagate, ScheduleSpec, Sector,
};
use annealab_bench::int_instance;

fn bench_hamiltonian_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    for n in [6usize, 10, 12] {
        let inst = int_instance(n);
        group.bench_with_input(BenchmarkId::new("ising", n), &n, |b, _| {
            b.iter(|| build_ising(&inst).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("transverse", n), &n, |b, &n| {
            b.iter(|| build_transverse(n).unwrap())
        });
    }
    group.finish();
}

fn bench_eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("lowest_eigenpairs");
    group.sample_size(10);
    for n in [8usize, 10, 12] {
        let inst = int_instance(n);
        let h = interpolate(
            &build_transverse(n).unwrap(),
            &build_ising(&inst).unwrap(),
            0.5,
        )
        .unwrap();
        let op = flip_symmetric_operator(&h).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| annealab::davidson::lowest_eigenpairs(&op, 2).unwrap())
        });
    }
    group.finish();
}

fn bench_gap_profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap_profile_grid16");
    group.sample_size(10);
    for n in [6usize, 8] {
        let inst = int_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| gap_profile(&inst, 16, Sector::FlipSymmetric).unwrap())
        });
    }
    group.finish();
}

fn bench_propagate(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagate_t10");
    group.sample_size(10);
    for n in [6usize, 8, 10] {
        let inst = int_instance(n);
        let schedule = ScheduleSpec::new(10.0, annealab::evolution::default_steps(&inst, 10.0))
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| propagate(&inst, &schedule, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_hamiltonian_build,
    bench_eigensolve,
    bench_gap_profile,
    bench_propagate
);
criterion_main!(benches);
