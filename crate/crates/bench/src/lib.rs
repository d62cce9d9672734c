//! Fixtures shared by the benchmarks.

use tracemap_core::exactnum::{rat, CycNum};
use tracemap_core::orbits::finite_orbit_seeds;
use tracemap_core::TraceTuple;

pub fn seed(id: &str) -> TraceTuple {
    finite_orbit_seeds().into_iter().find(|(n, _)| *n == id).expect("orbit id").1
}

/// Admissible triples with `E > 1` and every coordinate in `[-1, 1]`.
pub fn escape_triples() -> Vec<TraceTuple> {
    [(9, 10, 9, 10, -9, 10), (1, 2, 2, 3, -4, 5), (3, 4, -3, 4, 0, 1), (7, 8, 1, 8, -7, 8)]
        .iter()
        .map(|&(a, b, c, d, e, f)| TraceTuple::from_rats(&[rat(a, b), rat(c, d), rat(e, f)]).expect("real"))
        .collect()
}

/// `(1 + sqrt 5)/4` and a primitive 12th root of unity.
pub fn field_operands() -> (CycNum, CycNum) {
    let phi = tracemap_core::exactnum::parse_cyc("(1+sqrt(5))/4").expect("literal");
    (phi, CycNum::zeta(12, 1))
}
