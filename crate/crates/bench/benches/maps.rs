use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cremona_bench::{random_point, walk_map, z256, zwalk_map};

fn compose(c: &mut Criterion) {
    let mut g = c.benchmark_group("compose");
    for n in [8, 16, 32] {
        let f = zwalk_map(z256(), n, 3, 1).unwrap();
        let h = zwalk_map(z256(), n, 3, 2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(f.compose(&h).unwrap()))
        });
    }
    g.finish();
}

fn eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval");
    for n in [16, 32, 64] {
        let f = walk_map(z256(), n, 5, 1).unwrap();
        let x = random_point(z256(), n, 3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(f.eval(&x).unwrap()))
        });
    }
    g.finish();
}

fn walk(c: &mut Criterion) {
    let mut g = c.benchmark_group("walk_symbolic");
    for n in [16, 32, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(walk_map(z256(), n, 5, 1).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, compose, eval, walk);
criterion_main!(benches);
