//! Per-conductor field data: cyclotomic polynomials, Galois units and cached
//! numerical tables. Entries are created on first use and never evicted.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use super::interval::{cos_sin_2pi, Interval};

pub(crate) struct Field {
    pub n: u32,
    /// Euler phi of `n`, the degree of the field.
    pub phi: usize,
    /// Nonzero entries of `cyclo` below the leading term, as `(index, coeff)`.
    pub cyclo_sparse: Vec<(usize, i64)>,
    /// Units modulo `n`, ascending.
    pub units: Vec<u32>,
    /// Distinct prime factors of `n`.
    pub primes: Vec<u32>,
    /// `cos(2 pi j / n)` for `j < n`.
    pub cos_f64: Vec<f64>,
    pub sin_f64: Vec<f64>,
    numeric: Mutex<Vec<(u32, &'static [(Interval, Interval)])>>,
}

impl Field {
    fn build(n: u32) -> Field {
        let cyclo = cyclotomic_poly(n);
        let phi = cyclo.len() - 1;
        let cyclo_sparse = cyclo[..phi]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect();
        let units = (0..n.max(1))
            .filter(|k| (*k as u64).gcd(&(n as u64)) == 1)
            .map(|k| if n == 1 { 1 } else { k })
            .collect();
        let tau = std::f64::consts::TAU;
        let cos_f64 = (0..n).map(|j| (tau * j as f64 / n as f64).cos()).collect();
        let sin_f64 = (0..n).map(|j| (tau * j as f64 / n as f64).sin()).collect();
        Field {
            n,
            phi,
            cyclo_sparse,
            units,
            primes: prime_factors(n as u64).into_iter().map(|p| p as u32).collect(),
            cos_f64,
            sin_f64,
            numeric: Mutex::new(Vec::new()),
        }
    }

    /// Certified enclosures of `cos(2 pi j/n)` and `sin(2 pi j/n)` at `prec` bits.
    pub fn numeric(&self, prec: u32) -> &'static [(Interval, Interval)] {
        let mut guard = self.numeric.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((_, t)) = guard.iter().find(|(p, _)| *p == prec) {
            return t;
        }
        let table: Vec<(Interval, Interval)> = (0..self.n)
            .map(|j| cos_sin_2pi(j as i64, self.n as i64, prec))
            .collect();
        let leaked: &'static [(Interval, Interval)] = Box::leak(table.into_boxed_slice());
        guard.push((prec, leaked));
        leaked
    }
}

static GLOBAL: OnceLock<Mutex<HashMap<u32, &'static Field>>> = OnceLock::new();

thread_local! {
    static LOCAL: RefCell<HashMap<u32, &'static Field>> = RefCell::new(HashMap::new());
}

/// Field data for conductor `n`, shared by all threads.
pub(crate) fn field(n: u32) -> &'static Field {
    if let Some(f) = LOCAL.with(|l| l.borrow().get(&n).copied()) {
        return f;
    }
    let f = {
        let mut g = GLOBAL
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        *g.entry(n).or_insert_with(|| Box::leak(Box::new(Field::build(n))))
    };
    LOCAL.with(|l| l.borrow_mut().insert(n, f));
    f
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

fn moebius(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let n = n as u64;
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly: Vec<i64> = vec![1];
    // Multiply the factors with mu = +1 first so every division below is exact.
    for &d in &divisors {
        if moebius(n / d) == 1 {
            let mut next = vec![0i64; poly.len() + d as usize];
            for (i, c) in poly.iter().enumerate() {
                next[i + d as usize] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if moebius(n / d) == -1 {
            // Divide by x^d - 1: q_i = q_{i-d} - p_i walking up.
            let d = d as usize;
            let deg = poly.len() - 1;
            let mut q = vec![0i64; deg - d + 1];
            for i in 0..q.len() {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - poly[i];
            }
            poly = q;
        }
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // First cyclotomic polynomial with a coefficient of absolute value 2.
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn degree_is_phi() {
        for n in 1..300u32 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n as u64), "n={n}");
        }
    }

    #[test]
    fn product_over_divisors_is_xn_minus_one() {
        for n in [6u32, 12, 30, 36] {
            let mut prod = vec![1i64];
            for d in (1..=n).filter(|d| n % d == 0) {
                let c = cyclotomic_poly(d);
                let mut next = vec![0i64; prod.len() + c.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in c.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expect = vec![0i64; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, expect);
        }
    }
}
