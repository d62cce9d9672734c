use criterion::Criterion;
use tracemap_core::matgroups::{catalog_group, closure, GroupKind};
use tracemap_core::quadforms::{reflection_group_order, reflections_from, standard_rank4};

pub fn bench(c: &mut Criterion) {
    let bi = catalog_group(GroupKind::BI120).unwrap();
    c.bench_function("closure_bi120", |b| b.iter(|| closure(&bi, 200).unwrap()));

    let mut g = c.benchmark_group("coxeter");
    g.sample_size(10);
    for label in ["F4", "H4"] {
        let rs = reflections_from(&standard_rank4(label).unwrap(), 60).unwrap();
        g.bench_function(label, |b| b.iter(|| reflection_group_order(&rs, 20_000).unwrap()));
    }
    g.finish();
}
