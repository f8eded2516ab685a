//! Sequential against rayon-parallel execution of the two range scans.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use egyfrac::distribution::{default_z_grid, erdos_kac_cdf};
use egyfrac::moments::{scan, ScanOptions};
use egyfrac::par::Execution;

const N: u64 = 200_000;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn moment_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("moment_scan_a5");
    group.sample_size(10);
    for (name, exec) in modes() {
        let opts = ScanOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::new(name, N), &opts, |b, opts| {
            b.iter(|| scan(black_box(5), black_box(N), opts).unwrap())
        });
    }
    group.finish();
}

fn cdf_scan(c: &mut Criterion) {
    let grid = default_z_grid();
    let mut group = c.benchmark_group("erdos_kac_cdf_a1");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, N), &exec, |b, &exec| {
            b.iter(|| erdos_kac_cdf(black_box(1), black_box(N), &grid, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, moment_scan, cdf_scan);
criterion_main!(benches);
