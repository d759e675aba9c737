use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plemu::division::r_division;
use plemu::harness::exact_oracle;
use plemu::pipeline::{build_oracle, planar_emulator};
use plemu::one_hole_emulator;
use plemu_bench::{boundary_grid, scattered_grid, triangulation};

fn onehole(c: &mut Criterion) {
    let mut g = c.benchmark_group("onehole");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for m in [16, 32, 64] {
        let inst = boundary_grid(m, m);
        g.bench_with_input(BenchmarkId::new("grid", m * m), &inst, |b, i| b.iter(|| one_hole_emulator(i, 0.25).unwrap()));
    }
    g.finish();
}

fn division(c: &mut Criterion) {
    let mut g = c.benchmark_group("division");
    g.sample_size(10);
    for n in [1000, 5000] {
        let inst = triangulation(n, 64);
        g.bench_with_input(BenchmarkId::new("triangulation-r64", n), &inst, |b, i| b.iter(|| r_division(i, 64).unwrap()));
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    let tri = triangulation(5000, 128);
    g.bench_function("general-triangulation-5000", |b| b.iter(|| planar_emulator(&tri, 0.25).unwrap()));
    let grid = scattered_grid(48, 32);
    g.bench_function("general-grid-2304", |b| b.iter(|| planar_emulator(&grid, 0.25).unwrap()));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let inst = boundary_grid(48, 48);
    g.bench_function("build-grid-2304", |b| b.iter(|| build_oracle(&inst, 0.25).unwrap()));
    g.bench_function("exact-grid-2304", |b| b.iter(|| exact_oracle(&inst)));
    g.finish();
}

criterion_group!(benches, onehole, division, pipeline, oracle);
criterion_main!(benches);
