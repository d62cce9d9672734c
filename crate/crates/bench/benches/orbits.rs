use std::hint::black_box;

use criterion::Criterion;
use tracemap_bench::seed;
use tracemap_core::autact::alphabet;
use tracemap_core::matgroups::{triple_orbits, GroupKind};
use tracemap_core::orbits::{enumerate_orbit, perm_image_order};

pub fn bench(c: &mut Criterion) {
    let o3 = seed("O3");
    c.bench_function("enumerate_o3", |b| b.iter(|| enumerate_orbit(black_box(&o3), alphabet(2), 1000).unwrap()));
    let orbit = enumerate_orbit(&o3, alphabet(2), 1000).unwrap();
    c.bench_function("schreier_sims_o3", |b| b.iter(|| perm_image_order(black_box(&orbit), 100).unwrap()));

    let mut g = c.benchmark_group("rank3");
    g.sample_size(10);
    g.bench_function("bt24_inventory", |b| b.iter(|| triple_orbits(GroupKind::BT24, 100_000).unwrap()));
    let big = triple_orbits(GroupKind::BT24, 100_000).unwrap().pop().unwrap();
    g.bench_function("schreier_sims_degree_520", |b| b.iter(|| perm_image_order(black_box(&big), 1000).unwrap()));
    g.finish();
}
