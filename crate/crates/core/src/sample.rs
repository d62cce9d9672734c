//! Seeded random inputs for identity checks and ground-truth suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{rat, CycNum, Rat};
use crate::matgroups::Mat2;
use crate::tracepoints::{AngleVector, TraceTuple};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with `|num| <= 20` and `1 <= den <= 20`.
pub fn random_rat(rng: &mut SampleRng) -> Rat {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=20))
}

/// Rational in the closed interval `[-1, 1]` with denominator at most 20.
pub fn random_unit_rat(rng: &mut SampleRng) -> Rat {
    let den = rng.gen_range(1..=20);
    rat(rng.gen_range(-den..=den), den)
}

pub fn random_tuple(rng: &mut SampleRng, rank: usize) -> TraceTuple {
    let len = if rank == 2 { 3 } else { 7 };
    let v: Vec<CycNum> = (0..len).map(|_| CycNum::from_rat(&random_rat(rng))).collect();
    TraceTuple::new(v).expect("rational tuples are real")
}

/// Denominators whose pairwise and triple least common multiples stay within
/// the default conductor cap.
pub const ANGLE_DENOMINATORS: [i64; 9] = [1, 2, 3, 4, 5, 6, 8, 10, 12];

pub fn random_angles(rng: &mut SampleRng, rank: usize) -> AngleVector {
    let theta = (0..rank)
        .map(|_| {
            let den = ANGLE_DENOMINATORS[rng.gen_range(0..ANGLE_DENOMINATORS.len())];
            rat(rng.gen_range(0..den), den)
        })
        .collect();
    AngleVector::new(theta)
}

/// Random rational angle with a denominator of at most `max_den`.
pub fn random_angle_upto(rng: &mut SampleRng, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    rat(rng.gen_range(0..den), den)
}

/// Nonzero rational in `[-1, 1]`.
pub fn random_nonzero_unit_rat(rng: &mut SampleRng) -> Rat {
    loop {
        let r = random_unit_rat(rng);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

/// Rational plus a rational multiple of a root of unity of order 1, 3, 4 or 5.
pub fn random_cyclotomic(rng: &mut SampleRng) -> CycNum {
    let n = [1u32, 3, 4, 5][rng.gen_range(0..4)];
    let mut x = CycNum::from_rat(&random_rat(rng));
    if n > 1 {
        x = x + CycNum::zeta(n, rng.gen_range(0..n as i64)).mul_rat(&random_rat(rng));
    }
    x
}

/// Product of three random elementary matrices.
pub fn random_sl2(rng: &mut SampleRng) -> Mat2 {
    let mut m = Mat2::identity();
    for _ in 0..3 {
        let t = random_cyclotomic(rng);
        let e = if rng.gen() {
            Mat2::new(CycNum::one(), t, CycNum::zero(), CycNum::one())
        } else {
            Mat2::new(CycNum::one(), CycNum::zero(), t, CycNum::one())
        };
        m = m.mul(&e.expect("elementary matrices have det 1"));
    }
    m
}
