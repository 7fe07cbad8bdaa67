use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lappoly_core::ehrhart::{laplacian_hstar, HstarMethod};
use lappoly_core::triangulate::{f_vector_of, laplacian_triangulation, verify_triangulation};
use lappoly_core::{Budget, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn triangulation(c: &mut Criterion) {
    let budget = Budget::default();
    let t = laplacian_triangulation(4, &budget, Exec::default()).unwrap();
    let mut g = c.benchmark_group("triangulation_d4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("census", name), &exec, |b, &e| b.iter(|| f_vector_of(&t, &budget, e).unwrap()));
        g.bench_with_input(BenchmarkId::new("verify", name), &exec, |b, &e| b.iter(|| verify_triangulation(&t, e).unwrap()));
    }
    g.finish();
}

fn fundamental(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("fundamental_d5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| laplacian_hstar(5, HstarMethod::Fundamental, &budget, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, triangulation, fundamental);
criterion_main!(benches);
