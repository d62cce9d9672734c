//! Exact arithmetic over the rationals and over cyclotomic fields.

mod cyclo;
mod field;
pub mod interval;
pub mod poly;

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

pub use cyclo::CycNum;
pub use field::{cyclotomic_poly, euler_phi, prime_factors};
pub use interval::Interval;
pub use poly::RatPoly;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p`, `p/q` or a decimal such as `0.9`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.trim_start().starts_with('-');
        let ip = if ip.is_empty() || ip == "-" || ip == "+" { BigInt::zero() } else { BigInt::from_str(ip).map_err(|_| bad())? };
        let scale = BigInt::from(10).pow(fp.len() as u32);
        let frac = BigInt::from_str(fp).map_err(|_| bad())?;
        let mag = ip.abs() * &scale + frac;
        return Ok(Rat::new(if neg { -mag } else { mag }, scale));
    }
    Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduce a rational into `[0, 1)`.
pub fn frac_part(q: &Rat) -> Rat {
    q - q.floor()
}

/// `cos(2 pi q)` as an exact cyclotomic number.
pub fn real_cos(q: &Rat) -> CycNum {
    let q = frac_part(q);
    let m = q.denom().to_u32().expect("angle denominator fits in u32");
    let k = q.numer().to_i64().expect("angle numerator fits in i64");
    let z = CycNum::zero() + CycNum::zeta(m, k) + CycNum::zeta(m, -k);
    z.mul_rat(&rat(1, 2))
}

/// `sin(2 pi q)` as an exact cyclotomic number.
pub fn real_sin(q: &Rat) -> CycNum {
    let q = frac_part(q);
    let m = q.denom().to_u32().expect("angle denominator fits in u32");
    let k = q.numer().to_i64().expect("angle numerator fits in i64");
    // (z^k - z^-k) / (2i)
    let d = CycNum::zeta(m, k) - CycNum::zeta(m, -k);
    (&d * &CycNum::zeta(4, -1)).mul_rat(&rat(1, 2))
}

/// `exp(2 pi i q)`.
pub fn root_of_unity(q: &Rat) -> CycNum {
    let q = frac_part(q);
    let m = q.denom().to_u32().expect("angle denominator fits in u32");
    CycNum::zeta(m, q.numer().to_i64().expect("angle numerator fits in i64"))
}

/// Returns the smallest `q` in `[0, 1/2]` with `cos(2 pi q) = x`, if any.
pub fn recognize_rational_angle(x: &CycNum) -> Result<Option<Rat>> {
    if !x.is_real() {
        return Err(Error::NotReal(x.to_string()));
    }
    if x.abs_gt_one()? {
        return Err(Error::OutOfRange(format!("{x} is outside [-1, 1]")));
    }
    let d = x.degree() as u64;
    let theta = x.to_f64().clamp(-1.0, 1.0).acos() / std::f64::consts::TAU;
    // phi(m) >= sqrt(m/2), so phi(m) <= 2d forces m <= 8 d^2
    let max_m = 8 * d * d + 8;
    for m in 1..=max_m {
        let phi = euler_phi(m);
        if phi > 2 * d {
            continue;
        }
        let deg = if m <= 2 { 1 } else { phi / 2 };
        if deg != d {
            continue;
        }
        let guess = (theta * m as f64).round() as i64;
        for k in (guess - 1).max(0)..=(guess + 1).min(m as i64 / 2) {
            if k.gcd(&(m as i64)) != 1 {
                continue;
            }
            let q = rat(k, m as i64);
            if real_cos(&q) == *x {
                return Ok(Some(q));
            }
        }
    }
    Ok(None)
}

/// Exact square root of a rational inside a cyclotomic field, positive when `r > 0`
/// and `i sqrt(-r)` when `r < 0`.
pub fn sqrt_rat(r: &Rat) -> Result<CycNum> {
    if r.is_zero() {
        return Ok(CycNum::zero());
    }
    let neg = r.is_negative();
    let r = r.abs();
    // sqrt(a/b) = sqrt(a b) / b
    let ab = r.numer() * r.denom();
    let (square, free) = squarefree_split(&ab)
        .ok_or_else(|| Error::NoCyclotomicSqrt(fmt_rat(&r)))?;
    let mut root = CycNum::one();
    for p in prime_factors(free) {
        root = &root * &sqrt_prime(p);
    }
    if neg {
        root = &root * &CycNum::zeta(4, 1);
    }
    Ok(root.mul_rat(&Rat::new(square, r.denom().clone())))
}

/// `n = s^2 f` with `f` squarefree; gives `(s, f)` when `n` can be factored by trial division.
fn squarefree_split(n: &BigInt) -> Option<(BigInt, u64)> {
    let mut n = n.to_u64()?;
    let mut s = BigInt::one();
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if p > 2_000_000 {
            return None;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        s *= BigInt::from(p).pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    Some((s, f * n))
}

fn sqrt_prime(p: u64) -> CycNum {
    let root = if p == 2 {
        CycNum::zeta(8, 1) + CycNum::zeta(8, -1)
    } else {
        // quadratic Gauss sum, g^2 = (-1)^((p-1)/2) p
        let mut g = CycNum::zero();
        for a in 1..p {
            let l = legendre(a, p);
            g = &g + &CycNum::zeta(p as u32, a as i64).mul_int(l);
        }
        if p % 4 == 3 {
            &g * &CycNum::zeta(4, -1)
        } else {
            g
        }
    };
    if root.to_f64() < 0.0 {
        -root
    } else {
        root
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Parse the text forms accepted on input: `p/q`, decimals, `cos(p/q)`,
/// `sqrt(p/q)`, `zeta(m,k)` and the display form `zN^k`, combined with `+ - *` and parentheses.
pub fn parse_cyc(s: &str) -> Result<CycNum> {
    let mut p = ExprParser { s: s.as_bytes(), i: 0, src: s };
    let v = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err());
    }
    Ok(v)
}

struct ExprParser<'a> {
    s: &'a [u8],
    i: usize,
    src: &'a str,
}

impl ExprParser<'_> {
    fn err(&self) -> Error {
        Error::Parse(format!("invalid number expression `{}` near offset {}", self.src, self.i))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.i]).map_err(|_| self.err())?;
        text.parse().map_err(|_| self.err())
    }

    fn expr(&mut self) -> Result<CycNum> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CycNum> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    let d = self.unary()?;
                    acc = acc.div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CycNum> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<CycNum> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
                    self.i += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.i]).map_err(|_| self.err())?;
                Ok(CycNum::from_rat(&parse_rat(text)?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_alphabetic() {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.i]).map_err(|_| self.err())?.to_string();
                if name == "z" && self.s.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
                    // display form `z<N>^<k>`
                    let n = self.digits()?;
                    if self.s.get(self.i) != Some(&b'^') {
                        return Err(self.err());
                    }
                    self.i += 1;
                    let k = self.digits()?;
                    return Ok(CycNum::zeta(n as u32, k as i64));
                }
                if self.peek() != Some(b'(') {
                    return Err(self.err());
                }
                self.i += 1;
                let start = self.i;
                let mut depth = 1;
                while self.i < self.s.len() && depth > 0 {
                    match self.s[self.i] {
                        b'(' => depth += 1,
                        b')' => depth -= 1,
                        _ => {}
                    }
                    self.i += 1;
                }
                if depth != 0 {
                    return Err(self.err());
                }
                let arg = std::str::from_utf8(&self.s[start..self.i - 1]).map_err(|_| self.err())?;
                match name.as_str() {
                    "cos" => Ok(real_cos(&parse_rat(arg)?)),
                    "sin" => Ok(real_sin(&parse_rat(arg)?)),
                    "sqrt" => sqrt_rat(&parse_rat(arg)?),
                    "zeta" => {
                        let (m, k) = arg.split_once(',').ok_or_else(|| self.err())?;
                        let m: u32 = m.trim().parse().map_err(|_| self.err())?;
                        let k: i64 = k.trim().parse().map_err(|_| self.err())?;
                        if m == 0 {
                            return Err(self.err());
                        }
                        Ok(CycNum::zeta(m, k))
                    }
                    _ => Err(Error::Parse(format!("unknown function `{name}`"))),
                }
            }
            _ => Err(self.err()),
        }
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycNum", 2)?;
        st.serialize_field("N", &self.conductor())?;
        let c: Vec<String> = self.coeffs().iter().map(fmt_rat).collect();
        st.serialize_field("c", &c)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Full {
                #[serde(rename = "N")]
                n: u32,
                c: Vec<String>,
            },
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Full { n, c } => {
                if n == 0 {
                    return Err(de::Error::custom("conductor must be positive"));
                }
                let coeffs = c
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<Vec<_>>>()
                    .map_err(de::Error::custom)?;
                Ok(CycNum::from_coeffs(n, &coeffs))
            }
            Repr::Text(s) => parse_cyc(&s).map_err(de::Error::custom),
            Repr::Int(k) => Ok(CycNum::from_int(k)),
        }
    }
}

impl PartialOrd for CycNum {
    /// Real elements compare exactly; anything involving a non-real value is unordered.
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.cmp_real(o).ok()
    }
}

#[cfg(test)]
mod tests;
