use std::hint::black_box;

use criterion::Criterion;
use tracemap_bench::{escape_triples, seed};
use tracemap_core::classify::classify2;
use tracemap_core::quadforms::escape_large_coordinate;
use tracemap_core::Limits;

pub fn bench(c: &mut Criterion) {
    let lim = Limits::default();
    let pts = escape_triples();
    c.bench_function("escape_search", |b| {
        b.iter(|| pts.iter().map(|p| escape_large_coordinate(black_box(p), 64).unwrap().len()).sum::<usize>())
    });
    c.bench_function("classify2_infinite", |b| b.iter(|| classify2(black_box(&pts[0]), &lim).unwrap()));
    let o4 = seed("O4");
    c.bench_function("classify2_o4", |b| b.iter(|| classify2(black_box(&o4), &lim).unwrap()));
}
