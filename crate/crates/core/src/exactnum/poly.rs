//! Dense univariate polynomials over the rationals, with Sturm root counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rat = BigRational;

/// Coefficients low degree first, no trailing zeros (zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly(pub Vec<Rat>);

impl RatPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Remainder of Euclidean division; `d` must be nonzero.
    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] / &lead;
            if !c.is_zero() {
                for (i, di) in d.0.iter().enumerate() {
                    r[k + i] = &r[k + i] - &c * di;
                }
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = Rat::zero();
        RatPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatPoly(Vec::new());
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    /// Inverse of `self` modulo `m`, when they are coprime.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (m.clone(), self.div_rem(m).1);
        let (mut t0, mut t1) = (RatPoly(Vec::new()), RatPoly(vec![Rat::from_integer(1.into())]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = Rat::from_integer(1.into()) / &r0.0[0];
        Some(RatPoly::new(t0.0.iter().map(|x| x * &c).collect()))
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] / &lead;
            if !q.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[k - dd + i] = &r[k - dd + i] - &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        let chain = self.sturm_chain();
        let va = sign_changes(&chain, a);
        let vb = sign_changes(&chain, b);
        va.saturating_sub(vb)
    }
}

fn sign_changes(chain: &[RatPoly], x: &Rat) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn inverse_mod_cyclotomic() {
        // (t + 2)^-1 mod t^2 + t + 1 is (1 - t)/3
        let m = RatPoly::new(vec![r(1), r(1), r(1)]);
        let a = RatPoly::new(vec![r(2), r(1)]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!(inv, RatPoly::new(vec![Rat::new(1.into(), 3.into()), Rat::new((-1).into(), 3.into())]));
        assert!(RatPoly::new(vec![r(-1), r(1)]).inverse_mod(&RatPoly::new(vec![r(-1), r(0), r(1)])).is_none());
    }

    #[test]
    fn sturm_counts_roots_of_x2_minus_2() {
        let p = RatPoly::new(vec![r(-2), r(0), r(1)]);
        assert_eq!(p.count_roots(&r(-10), &r(10)), 2);
        assert_eq!(p.count_roots(&r(0), &r(10)), 1);
        assert_eq!(p.count_roots(&r(2), &r(10)), 0);
    }

    #[test]
    fn sturm_on_golden_ratio_polynomial() {
        // x^2 - x - 1 has roots near 1.618 and -0.618.
        let p = RatPoly::new(vec![r(-1), r(-1), r(1)]);
        assert_eq!(p.count_roots(&r(1), &r(2)), 1);
        assert_eq!(p.count_roots(&r(-1), &r(0)), 1);
    }
}
