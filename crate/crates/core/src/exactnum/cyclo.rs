//! Elements of cyclotomic fields in canonical form.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{cyclotomic_poly, field, Field};
use super::interval::Interval;
use super::poly::RatPoly;
use super::Rat;
use crate::error::{Error, Result};

/// An element of the cyclotomic field `Q(zeta_N)`.
///
/// Stored as `(num_0 + num_1 z + ... + num_{phi-1} z^{phi-1}) / den` with
/// `z = exp(2 pi i / N)`, reduced modulo the `N`-th cyclotomic polynomial.
/// The conductor is always the smallest `N` whose field contains the value and
/// the fraction is in lowest terms, so structural equality and hashing agree
/// with numeric equality across fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { n: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        CycNum { n: 1, num: vec![BigInt::from(k)], den: BigInt::one() }
    }

    pub fn from_rat(r: &Rat) -> Self {
        CycNum { n: 1, num: vec![r.numer().clone()], den: r.denom().clone() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rat(&Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `zeta_m^k` for any `m >= 1`.
    pub fn zeta(m: u32, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let (m, k, sign) = if m % 4 == 2 {
            // zeta_{2h} = -zeta_h^{(h+1)/2} for odd h
            let h = m / 2;
            let e = (k.rem_euclid(h as i64 * 2) * ((h as i64 + 1) / 2)).rem_euclid(h as i64);
            (h, e, if k.rem_euclid(2) == 1 { -1 } else { 1 })
        } else {
            (m, k.rem_euclid(m as i64), 1)
        };
        let mut raw = vec![BigInt::zero(); m as usize];
        raw[k as usize] = BigInt::from(sign);
        Self::from_raw(m, raw, BigInt::one())
    }

    /// Build from raw power-basis coefficients over conductor `m` (any length;
    /// exponents are taken modulo `m`). `m` may be congruent to 2 mod 4.
    pub fn from_coeffs(m: u32, coeffs: &[Rat]) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut acc = Self::zero();
        let mut raw = vec![BigInt::zero(); m as usize];
        for (j, c) in coeffs.iter().enumerate() {
            raw[j % m as usize] += c.numer() * (&den / c.denom());
        }
        if m % 4 == 2 {
            for (j, c) in raw.into_iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(&Self::zeta(m, j as i64) * &Self::from_rat(&Rat::from_integer(c)));
                }
            }
            return acc.div_int(&den);
        }
        Self::from_raw(m, raw, den)
    }

    fn from_raw(m: u32, mut raw: Vec<BigInt>, den: BigInt) -> Self {
        let f = field(m);
        fold_mod_n(&mut raw, m as usize);
        reduce(f, &mut raw);
        let (n, num) = descend(m, raw);
        normalize(n, num, den)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates over the canonical conductor.
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.num[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.num[0].is_one() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.num[0].clone(), self.den.clone()))
    }

    /// Lift the numerator into conductor `l`, a multiple of `self.n`.
    fn lift(&self, l: u32) -> Vec<BigInt> {
        if l == self.n {
            return self.num.clone();
        }
        let step = (l / self.n) as usize;
        let mut raw = vec![BigInt::zero(); l as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                raw[j * step] = c.clone();
            }
        }
        raw
    }

    fn common(&self, o: &Self) -> (u32, Vec<BigInt>, Vec<BigInt>) {
        let l = self.n.lcm(&o.n);
        let f = field(l);
        let mut a = self.lift(l);
        let mut b = o.lift(l);
        if l != self.n {
            reduce(f, &mut a);
        }
        if l != o.n {
            reduce(f, &mut b);
        }
        (l, a, b)
    }

    fn add_signed(&self, o: &Self, sign: i32) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign > 0 { o.clone() } else { -o };
        }
        let (l, a, b) = self.common(o);
        let (num, den) = if self.den == o.den {
            let num = a
                .into_iter()
                .zip(b)
                .map(|(x, y)| if sign > 0 { x + y } else { x - y })
                .collect();
            (num, self.den.clone())
        } else {
            let num = a
                .into_iter()
                .zip(b)
                .map(|(x, y)| {
                    let t = x * &o.den;
                    let u = y * &self.den;
                    if sign > 0 {
                        t + u
                    } else {
                        t - u
                    }
                })
                .collect();
            (num, &self.den * &o.den)
        };
        let (n, num) = descend(l, num);
        normalize(n, num, den)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.n == 1 {
            return o.scale(&self.num[0], &self.den);
        }
        if o.n == 1 {
            return self.scale(&o.num[0], &o.den);
        }
        let (l, a, b) = self.common(o);
        let f = field(l);
        let mut raw = vec![BigInt::zero(); 2 * f.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        reduce(f, &mut raw);
        let (n, num) = descend(l, raw);
        normalize(n, num, &self.den * &o.den)
    }

    fn scale(&self, p: &BigInt, q: &BigInt) -> Self {
        normalize(self.n, self.num.iter().map(|c| c * p).collect(), &self.den * q)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k), &BigInt::one())
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        self.scale(r.numer(), r.denom())
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by zero");
        self.scale(&BigInt::one(), k)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism `zeta -> zeta^k`, `k` a unit modulo the conductor.
    pub fn galois(&self, k: i64) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as i64;
        assert_eq!(k.rem_euclid(n).gcd(&n), 1, "not a unit modulo the conductor");
        let mut raw = vec![BigInt::zero(); self.n as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                raw[(j as i64 * k).rem_euclid(n) as usize] += c;
            }
        }
        let f = field(self.n);
        reduce(f, &mut raw);
        let (n, num) = descend(self.n, raw);
        normalize(n, num, self.den.clone())
    }

    /// Complex conjugate, the Galois map `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        self.n <= 2 || self.conj() == *self
    }

    /// Distinct Galois conjugates, starting with `self`.
    pub fn conjugates(&self) -> Vec<CycNum> {
        let f = field(self.n);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &k in &f.units {
            let c = self.galois(k as i64);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        out
    }

    /// Field norm down to the rationals.
    pub fn norm(&self) -> Rat {
        let f = field(self.n);
        let prod = f.units.iter().fold(Self::one(), |acc, &k| &acc * &self.galois(k as i64));
        prod.to_rat().expect("norm is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(normalize(1, vec![self.den.clone()], self.num[0].clone()));
        }
        let phi_n = RatPoly::new(cyclotomic_poly(self.n).into_iter().map(|c| Rat::from_integer(c.into())).collect());
        let a = RatPoly::new(self.num.iter().map(|c| Rat::from_integer(c.clone())).collect());
        let inv = a.inverse_mod(&phi_n).expect("nonzero element of a field");
        let den = Rat::from_integer(self.den.clone());
        let coeffs: Vec<Rat> = inv.coeffs().iter().map(|c| c * &den).collect();
        Ok(Self::from_coeffs(self.n, &coeffs))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    /// Minimal polynomial over the rationals.
    pub fn minimal_polynomial(&self) -> RatPoly {
        let mut coeffs = vec![Self::one()];
        for c in self.conjugates() {
            // multiply by (t - c)
            let mut next = vec![Self::zero(); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] - &(a * &c);
            }
            coeffs = next;
        }
        RatPoly::new(coeffs.iter().map(|c| c.to_rat().expect("rational coefficient")).collect())
    }

    pub fn degree(&self) -> usize {
        self.conjugates().len()
    }

    /// Real part as a float.
    pub fn to_f64(&self) -> f64 {
        self.to_c64().0
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let f = field(self.n);
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                let c = c.to_f64().unwrap_or(f64::NAN);
                re += c * f.cos_f64[j];
                im += c * f.sin_f64[j];
            }
        }
        (re / den, im / den)
    }

    /// Certified enclosure of the real part at `prec` bits.
    pub fn numeric_embed(&self, prec: u32) -> Interval {
        self.numeric_embed_complex(prec).0
    }

    /// Certified enclosures of the real and imaginary parts.
    pub fn numeric_embed_complex(&self, prec: u32) -> (Interval, Interval) {
        if self.n == 1 {
            return (Interval::from_ratio(&self.num[0], &self.den, prec), Interval::zero(prec));
        }
        let f = field(self.n);
        let table = f.numeric(prec);
        let mut re = Interval::zero(prec);
        let mut im = Interval::zero(prec);
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                re = re.add(&table[j].0.mul_int(c));
                im = im.add(&table[j].1.mul_int(c));
            }
        }
        (re.div_int(&self.den), im.div_int(&self.den))
    }

    /// Sign of a real element, decided exactly.
    pub fn signum_real(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if self.n == 1 {
            return Ok(self.num[0].sign().cmp_zero());
        }
        if !self.is_real() {
            return Err(Error::NotReal(self.to_string()));
        }
        // f64 fast path with a generous rounding bound
        let f = field(self.n);
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        let mut finite = true;
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                let c = c.to_f64().unwrap_or(f64::NAN);
                finite &= c.is_finite();
                v += c * f.cos_f64[j];
                mag += c.abs();
            }
        }
        let bound = mag * (f.phi as f64 + 16.0) * 4.0 * f64::EPSILON;
        if finite && v.abs() > bound {
            return Ok(if v > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        // certified intervals; a Liouville-type bound caps the useful precision
        let height_bits = self.num.iter().map(|c| c.bits()).max().unwrap_or(0) + f.phi as u64;
        let cap = (f.phi as u64 * (self.den.bits() + height_bits) + 128).min(1 << 20) as u32;
        let mut prec = 96u32;
        loop {
            let i = self.numeric_embed(prec);
            if i.is_positive() {
                return Ok(Ordering::Greater);
            }
            if i.is_negative() {
                return Ok(Ordering::Less);
            }
            if prec >= cap {
                break;
            }
            prec = (prec * 2).min(cap);
        }
        Ok(self.signum_sturm())
    }

    /// Sign via root isolation on the minimal polynomial.
    pub(crate) fn signum_sturm(&self) -> Ordering {
        let f = self.minimal_polynomial();
        let mut prec = 64u32;
        loop {
            let i = self.numeric_embed(prec);
            let ulp = Rat::new(BigInt::one(), BigInt::one() << prec as usize);
            let lo = i.lo() - &ulp;
            let hi = i.hi();
            if f.count_roots(&lo, &hi) == 1 {
                if hi.is_negative() {
                    return Ordering::Less;
                }
                if lo.is_positive() || lo.is_zero() {
                    return Ordering::Greater;
                }
                return if f.count_roots(&lo, &Rat::zero()) == 1 { Ordering::Less } else { Ordering::Greater };
            }
            prec *= 2;
        }
    }

    /// Exact comparison of two real elements.
    pub fn cmp_real(&self, o: &Self) -> Result<Ordering> {
        (self - o).signum_real()
    }

    pub fn abs_real(&self) -> Result<Self> {
        Ok(if self.signum_real()? == Ordering::Less { -self } else { self.clone() })
    }

    /// Exact test `|self| > 1` for a real element.
    pub fn abs_gt_one(&self) -> Result<bool> {
        let one = Self::one();
        Ok(self.cmp_real(&one)? == Ordering::Greater || self.cmp_real(&-&one)? == Ordering::Less)
    }

    /// Exact test `|self| <= 1`.
    pub fn abs_le_one(&self) -> Result<bool> {
        Ok(!self.abs_gt_one()?)
    }

    pub fn check_cap(&self, cap: u32) -> Result<()> {
        if self.n > cap {
            return Err(Error::ConductorCap { conductor: self.n as u64, cap });
        }
        Ok(())
    }

    /// Canonical text for a single coefficient list, used for stable sorting.
    pub fn canonical_key(&self) -> String {
        let c: Vec<String> = self.coeffs().iter().map(super::fmt_rat).collect();
        format!("{}:{}", self.n, c.join(","))
    }
}

fn fold_mod_n(raw: &mut Vec<BigInt>, n: usize) {
    if raw.len() > n {
        for j in n..raw.len() {
            let c = std::mem::take(&mut raw[j]);
            raw[j % n] += c;
        }
        raw.truncate(n);
    }
}

/// Reduce a polynomial in place modulo the cyclotomic polynomial of `f`.
fn reduce(f: &Field, v: &mut Vec<BigInt>) {
    let phi = f.phi;
    if v.len() < phi {
        v.resize(phi, BigInt::zero());
        return;
    }
    for k in (phi..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[k]);
        for &(i, ci) in &f.cyclo_sparse {
            v[k - phi + i] -= &c * ci;
        }
    }
    v.truncate(phi);
}

fn normalize(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> CycNum {
    if num.iter().all(|c| c.is_zero()) {
        return CycNum::zero();
    }
    if den.is_negative() {
        den = -den;
        for c in num.iter_mut() {
            *c = -&*c;
        }
    }
    let mut g = den.clone();
    for c in &num {
        if g.is_one() {
            break;
        }
        g = g.gcd(c);
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = &*c / &g;
        }
        den = den / &g;
    }
    CycNum { n, num, den }
}

/// Move a reduced numerator down to the smallest cyclotomic subfield holding it.
fn descend(mut n: u32, mut num: Vec<BigInt>) -> (u32, Vec<BigInt>) {
    'outer: loop {
        if n == 1 {
            return (n, num);
        }
        let f = field(n);
        for &p in &f.primes {
            if p == 2 {
                if n % 8 == 0 {
                    if sparse_on_multiples(&num, 2) {
                        num = num.into_iter().step_by(2).collect();
                        n /= 2;
                        num.truncate(field(n).phi);
                        continue 'outer;
                    }
                } else if let Some(sub) = split_descend(n, 4, &num) {
                    num = sub;
                    n /= 4;
                    continue 'outer;
                }
            } else if (n / p) % p == 0 {
                if sparse_on_multiples(&num, p as usize) {
                    num = num.into_iter().step_by(p as usize).collect();
                    n /= p;
                    num.truncate(field(n).phi);
                    continue 'outer;
                }
            } else if let Some(sub) = split_descend(n, p, &num) {
                num = sub;
                n /= p;
                continue 'outer;
            }
        }
        return (n, num);
    }
}

fn sparse_on_multiples(num: &[BigInt], p: usize) -> bool {
    num.iter().enumerate().all(|(j, c)| j % p == 0 || c.is_zero())
}

/// For `n = q m` with `gcd(q, m) = 1` and `q` an odd prime or 4, write the element
/// as `sum_r y_r zeta_q^r` with `y_r` in `Q(zeta_m)` and return the
/// `Q(zeta_m)`-coordinates when the element lies in that subfield.
fn split_descend(n: u32, q: u32, num: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = n / q;
    let mi = m as i64;
    let qi = q as i64;
    // zeta_n = zeta_m^a zeta_q^b
    let a = if m == 1 { 0 } else { mod_inverse(qi.rem_euclid(mi), mi) };
    let b = mod_inverse(mi.rem_euclid(qi), qi);
    let mut ys: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); m as usize]; q as usize];
    for (e, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = e as i64;
        let em = if m == 1 { 0 } else { (a * e).rem_euclid(mi) } as usize;
        let eq = (b * e).rem_euclid(qi) as usize;
        ys[eq][em] += c;
    }
    let fm = field(m);
    for y in ys.iter_mut() {
        reduce(fm, y);
    }
    if q == 4 {
        // basis 1, i with i^2 = -1
        if ys[1] != ys[3] {
            return None;
        }
        return Some(ys[0].iter().zip(&ys[2]).map(|(x, y)| x - y).collect());
    }
    // basis 1, zeta_q, ..., zeta_q^{q-2}; zeta_q^{q-1} = -(1 + ... + zeta_q^{q-2})
    let last = &ys[q as usize - 1];
    if ys[1..q as usize - 1].iter().any(|y| y != last) {
        return None;
    }
    Some(ys[0].iter().zip(last).map(|(x, y)| x - y).collect())
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let g = num_integer::Integer::extended_gcd(&a, &m);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m)
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rat() {
            return write!(f, "{}", super::fmt_rat(&r));
        }
        let mut first = true;
        write!(f, "(")?;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            write!(f, "{sign}")?;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{}", self.n, j)?,
                _ => write!(f, "{mag}*z{}^{}", self.n, j)?,
            }
            first = false;
        }
        write!(f, ")")?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                $body(self, o)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                $body(&self, &o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                $body(&self, o)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                $body(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_signed(b, 1));
forward_binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_signed(b, -1));
forward_binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_ref(b));

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl From<i64> for CycNum {
    fn from(k: i64) -> Self {
        CycNum::from_int(k)
    }
}

impl From<BigRational> for CycNum {
    fn from(r: BigRational) -> Self {
        CycNum::from_rat(&r)
    }
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}
