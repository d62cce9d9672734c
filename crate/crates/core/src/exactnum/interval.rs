//! Certified dyadic interval arithmetic.
//!
//! An [`Interval`] at precision `p` is `[lo / 2^p, hi / 2^p]` with integer
//! endpoints. Every operation rounds outward, so the true value is always
//! enclosed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p as usize
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    pub fn point(v: BigInt, prec: u32) -> Self {
        let v = v << prec as usize;
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval { lo: BigInt::zero(), hi: BigInt::zero(), prec }
    }

    /// Enclosure of `num / den`; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled = num << prec as usize;
        Interval { lo: floor_div(&scaled, &den), hi: ceil_div(&scaled, &den), prec }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Width in units of `2^-prec`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        scale_f64(&self.width_ulps(), self.prec)
    }

    pub fn mid_f64(&self) -> f64 {
        scale_f64(&(&self.lo + &self.hi), self.prec + 1)
    }

    pub fn lo_f64(&self) -> f64 {
        scale_f64(&self.lo, self.prec)
    }

    pub fn hi_f64(&self) -> f64 {
        scale_f64(&self.hi, self.prec)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo() <= r && r <= &self.hi()
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        if k.is_negative() {
            Interval { lo: &self.hi * k, hi: &self.lo * k, prec: self.prec }
        } else {
            Interval { lo: &self.lo * k, hi: &self.hi * k, prec: self.prec }
        }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Self {
        let t = if k.is_negative() { self.neg() } else { self.clone() };
        let k = k.abs();
        Interval { lo: floor_div(&t.lo, &k), hi: ceil_div(&t.hi, &k), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        let prods = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        let s = pow2(self.prec);
        Interval { lo: floor_div(min, &s), hi: ceil_div(max, &s), prec: self.prec }
    }

    /// Reciprocal, or `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let s = pow2(2 * self.prec);
        // 1/x is decreasing on each sign branch.
        Some(Interval { lo: floor_div(&s, &self.hi), hi: ceil_div(&s, &self.lo), prec: self.prec })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.recip().map(|r| self.mul(&r))
    }

    /// Square root; `None` if the interval is entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() { BigInt::zero() } else { self.lo.clone() };
        let lo_s = (lo << self.prec as usize).sqrt();
        let hi_scaled = &self.hi << self.prec as usize;
        let mut hi_s = hi_scaled.sqrt();
        if &hi_s * &hi_s < hi_scaled {
            hi_s += 1;
        }
        Some(Interval { lo: lo_s, hi: hi_s, prec: self.prec })
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (-&self.lo).max(self.hi.clone());
            Interval { lo: BigInt::zero(), hi: m, prec: self.prec }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Join of the two enclosures.
    pub fn hull(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec,
        }
    }
}

fn scale_f64(v: &BigInt, prec: u32) -> f64 {
    // Keep 64 significant bits before converting.
    let bits = v.bits() as i64;
    let shift = (bits - 64).max(0);
    let head = (v >> shift as usize).to_f64().unwrap_or(f64::NAN);
    head * 2f64.powi((shift - prec as i64) as i32)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo_f64(), self.hi_f64())
    }
}

/// Fixed-point approximation: value `v / 2^wp` with absolute error at most `err / 2^wp`.
struct Approx {
    v: BigInt,
    err: u64,
}

fn atan_inv(k: u64, wp: u32) -> Approx {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = pow2(wp) / &k;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power / &k2;
        i += 1;
    }
    Approx { v: sum, err: 3 * i + 3 }
}

fn pi_fixed(wp: u32) -> Approx {
    let a = atan_inv(5, wp);
    let b = atan_inv(239, wp);
    Approx { v: a.v * 16 - b.v * 4, err: 16 * a.err + 4 * b.err }
}

/// Enclosure of pi at `prec` bits.
pub fn pi(prec: u32) -> Interval {
    let wp = prec + 32;
    finish(pi_fixed(wp), wp, prec)
}

fn finish(a: Approx, wp: u32, prec: u32) -> Interval {
    let s = pow2(wp - prec);
    let e = BigInt::from(a.err);
    Interval { lo: floor_div(&(&a.v - &e), &s), hi: ceil_div(&(&a.v + &e), &s), prec }
}

/// Series for cos and sin at a fixed-point argument `0 <= x <= 2`.
fn cos_sin_series(x: &BigInt, wp: u32) -> (Approx, Approx) {
    let one = pow2(wp);
    let x2 = (x * x) >> wp as usize;
    let mut c_term = one.clone();
    let mut c_sum = one.clone();
    let mut s_term = x.clone();
    let mut s_sum = x.clone();
    let mut i: u64 = 1;
    let mut nc = 1;
    let mut ns = 1;
    loop {
        let mut progressed = false;
        if !c_term.is_zero() {
            c_term = (&c_term * &x2) / (&one * BigInt::from((2 * i - 1) * (2 * i)));
            if i % 2 == 1 {
                c_sum -= &c_term;
            } else {
                c_sum += &c_term;
            }
            nc += 1;
            progressed = true;
        }
        if !s_term.is_zero() {
            s_term = (&s_term * &x2) / (&one * BigInt::from((2 * i) * (2 * i + 1)));
            if i % 2 == 1 {
                s_sum -= &s_term;
            } else {
                s_sum += &s_term;
            }
            ns += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
        i += 1;
    }
    (Approx { v: c_sum, err: 4 * nc + 4 }, Approx { v: s_sum, err: 4 * ns + 4 })
}

/// Certified enclosures of `cos(2 pi j/n)` and `sin(2 pi j/n)` at `prec` bits.
pub fn cos_sin_2pi(j: i64, n: i64, prec: u32) -> (Interval, Interval) {
    assert!(n > 0);
    // t = num / den with den = 2n, reduced into [0, 1/4].
    let den = 2 * n;
    let mut num = 2 * j.rem_euclid(n);
    let mut sin_sign = 1;
    if 2 * num > den {
        num = den - num;
        sin_sign = -1;
    }
    if 4 * num > den {
        // cos(2 pi t) = -cos(2 pi (1/2 - t)), sin unchanged
        return cos_sin_reduced(den - 2 * num, 2 * den, prec, -1, sin_sign);
    }
    cos_sin_reduced(num, den, prec, 1, sin_sign)
}

fn cos_sin_reduced(num: i64, den: i64, prec: u32, cs: i32, ss: i32) -> (Interval, Interval) {
    if num == 0 {
        let one = Interval::point(BigInt::from(cs), prec);
        return (one, Interval::zero(prec));
    }
    if 4 * num == den {
        return (Interval::zero(prec), Interval::point(BigInt::from(ss), prec));
    }
    let wp = prec + 40;
    let p = pi_fixed(wp);
    // x = 2 pi num / den
    let scaled = &p.v * BigInt::from(2 * num);
    let x = floor_div(&scaled, &BigInt::from(den));
    let xerr = (2 * p.err * num as u64) / den as u64 + 2;
    let (c, s) = cos_sin_series(&x, wp);
    let c = Approx { v: c.v * cs, err: c.err + xerr };
    let s = Approx { v: s.v * ss, err: s.err + xerr };
    (clamp_unit(finish(c, wp, prec)), clamp_unit(finish(s, wp, prec)))
}

fn clamp_unit(mut i: Interval) -> Interval {
    let one = pow2(i.prec);
    let mone = -&one;
    if i.hi > one {
        i.hi = one.clone();
    }
    if i.lo < mone {
        i.lo = mone;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!(p.lo_f64() <= std::f64::consts::PI + 1e-15);
        assert!(p.hi_f64() >= std::f64::consts::PI - 1e-15);
        assert!(p.width_f64() < 1e-55);
        // 3.14159265358979323846264338327950288 as a rational lower/upper check
        let lo = BigRational::new(
            BigInt::parse_bytes(b"314159265358979323846264338327950288", 10).unwrap(),
            BigInt::from(10).pow(35),
        );
        let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(10).pow(35));
        assert!(p.lo() > lo - BigRational::new(BigInt::one(), BigInt::from(10).pow(35)));
        assert!(p.hi() < hi);
    }

    #[test]
    fn cos_sin_agree_with_f64() {
        for n in 1..60i64 {
            for j in 0..n {
                let (c, s) = cos_sin_2pi(j, n, 96);
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                assert!(c.lo_f64() <= t.cos() + 1e-14 && t.cos() - 1e-14 <= c.hi_f64(), "cos {j}/{n}");
                assert!(s.lo_f64() <= t.sin() + 1e-14 && t.sin() - 1e-14 <= s.hi_f64(), "sin {j}/{n}");
                assert!(c.width_f64() < 1e-25 && s.width_f64() < 1e-25);
            }
        }
    }

    #[test]
    fn cos_pi_over_three_is_half() {
        let (c, _) = cos_sin_2pi(1, 6, 128);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(c.contains_rational(&half));
    }

    #[test]
    fn sqrt_two_encloses() {
        let two = Interval::point(BigInt::from(2), 100);
        let r = two.sqrt().unwrap();
        let sq = r.mul(&r);
        assert!(sq.contains_rational(&BigRational::from_integer(BigInt::from(2))));
        assert!(r.width_f64() < 1e-28);
    }

    #[test]
    fn division_and_recip() {
        let a = Interval::from_ratio(&BigInt::from(1), &BigInt::from(3), 80);
        let b = Interval::from_ratio(&BigInt::from(-2), &BigInt::from(7), 80);
        let q = a.div(&b).unwrap();
        let exact = BigRational::new(BigInt::from(-7), BigInt::from(6));
        assert!(q.contains_rational(&exact));
        assert!(Interval::zero(10).recip().is_none());
    }
}
