use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use thermocorr::par::ExecMode;
use thermocorr::selftest::run_selftest;
use thermocorr::thresholds::threshold_gme_dicke_many;

fn selftest(c: &mut Criterion) {
    let mut group = c.benchmark_group("selftest_200");
    group.sample_size(10);
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &mode, |b, &mode| {
            b.iter(|| black_box(run_selftest(200, 11, mode)))
        });
    }
    group.finish();
}

fn dicke_thresholds(c: &mut Criterion) {
    let ns: Vec<usize> = (6..=16).collect();
    let mut group = c.benchmark_group("dicke_thresholds_6_16");
    group.sample_size(10);
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &mode, |b, &mode| {
            b.iter(|| black_box(threshold_gme_dicke_many(&ns, 1, mode).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, selftest, dicke_thresholds);
criterion_main!(benches);
