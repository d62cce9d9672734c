use std::hint::black_box;

use criterion::Criterion;
use tracemap_bench::field_operands;
use tracemap_core::exactnum::recognize_rational_angle;

pub fn bench(c: &mut Criterion) {
    let (phi, z) = field_operands();
    let w = &phi + &z;
    c.bench_function("cyc_mul_conductor_60", |b| b.iter(|| black_box(&w) * black_box(&w)));
    c.bench_function("cyc_inverse_conductor_60", |b| b.iter(|| black_box(&w).inv().unwrap()));
    c.bench_function("recognize_angle_golden", |b| b.iter(|| recognize_rational_angle(black_box(&phi)).unwrap()));
}
