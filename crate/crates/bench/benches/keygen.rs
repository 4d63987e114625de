use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cremona_bench::z256;
use cremona_core::PrivateKey;

fn keygen(c: &mut Criterion) {
    let mut g = c.benchmark_group("keygen");
    g.sample_size(10);
    for n in [10, 20, 40] {
        for p in [10, 20] {
            let key = PrivateKey::generate(n, z256(), p, 7).unwrap();
            g.bench_with_input(BenchmarkId::new(format!("p{p}"), n), &n, |b, _| {
                b.iter(|| black_box(key.public_map().unwrap()))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, keygen);
criterion_main!(benches);
