//! Trace tuples, the invariant polynomials E, F, G, the relation ideal for
//! cosines of angle sums, the parametrisations by angles, and region tests.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{frac_part, real_cos, recognize_rational_angle, CycNum, Rat};
use crate::limits::Limits;

pub const LABELS2: [&str; 3] = ["1", "2", "12"];
pub const LABELS3: [&str; 7] = ["1", "2", "3", "12", "13", "23", "123"];

/// A point of R^3 (rank 2) or R^7 (rank 3) in half-trace coordinates, stored
/// in the order `(x1, x2, x12)` or `(x1, x2, x3, x12, x13, x23, x123)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TraceTuple {
    x: Vec<CycNum>,
}

impl TraceTuple {
    /// Validates length (3 or 7) and that every coordinate is real.
    pub fn new(x: Vec<CycNum>) -> Result<Self> {
        if x.len() != 3 && x.len() != 7 {
            return Err(Error::ArityMismatch { expected: 7, found: x.len() });
        }
        if let Some(c) = x.iter().find(|c| !c.is_real()) {
            return Err(Error::NotReal(c.to_string()));
        }
        Ok(TraceTuple { x })
    }

    /// Skips the realness check; for images of real tuples under polynomial maps.
    pub(crate) fn from_vec(x: Vec<CycNum>) -> Self {
        debug_assert!(x.len() == 3 || x.len() == 7);
        TraceTuple { x }
    }

    pub fn triple(x: CycNum, y: CycNum, z: CycNum) -> Result<Self> {
        Self::new(vec![x, y, z])
    }

    pub fn from_rats(v: &[Rat]) -> Result<Self> {
        Self::new(v.iter().map(CycNum::from_rat).collect())
    }

    pub fn from_ints_ratio(v: &[(i64, i64)]) -> Result<Self> {
        Self::new(v.iter().map(|&(p, q)| CycNum::from_ratio(p, q)).collect())
    }

    pub fn zeros(rank: usize) -> Self {
        let len = if rank == 2 { 3 } else { 7 };
        TraceTuple { x: vec![CycNum::zero(); len] }
    }

    /// Free-group rank: 2 for triples, 3 for septuples.
    pub fn arity(&self) -> usize {
        if self.x.len() == 3 {
            2
        } else {
            3
        }
    }

    pub fn labels(&self) -> &'static [&'static str] {
        if self.x.len() == 3 {
            &LABELS2
        } else {
            &LABELS3
        }
    }

    pub fn coords(&self) -> &[CycNum] {
        &self.x
    }

    pub fn into_coords(self) -> Vec<CycNum> {
        self.x
    }

    pub fn get(&self, label: &str) -> Option<&CycNum> {
        self.labels().iter().position(|l| *l == label).map(|i| &self.x[i])
    }

    /// Conductor of the smallest cyclotomic field containing every coordinate.
    pub fn conductor(&self) -> u64 {
        self.x.iter().fold(1u64, |acc, c| acc.lcm(&(c.conductor() as u64)))
    }

    pub fn check_limits(&self, limits: &Limits) -> Result<()> {
        let c = self.conductor();
        if c > limits.conductor_cap as u64 {
            return Err(Error::ConductorCap { conductor: c, cap: limits.conductor_cap });
        }
        Ok(())
    }

    pub fn expect_arity(&self, n: usize) -> Result<()> {
        if self.arity() != n {
            return Err(Error::ArityMismatch { expected: if n == 2 { 3 } else { 7 }, found: self.x.len() });
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.x.iter().map(|c| c.to_f64()).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.x.iter().filter(|c| !c.is_zero()).count()
    }

    /// At most one coordinate is nonzero.
    pub fn is_axis(&self) -> bool {
        self.nonzero_count() <= 1
    }

    /// Some coordinate has absolute value greater than one (exact).
    pub fn has_large_coordinate(&self) -> Result<bool> {
        for c in &self.x {
            if c.abs_gt_one()? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Index of the first coordinate equal to +1 or -1.
    pub fn unit_coordinate(&self) -> Option<usize> {
        let one = CycNum::one();
        let mone = -&one;
        self.x.iter().position(|c| *c == one || *c == mone)
    }
}

impl fmt::Debug for TraceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TraceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.x.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for TraceTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coords<'a>(&'a TraceTuple);
        impl Serialize for Coords<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.x.len()))?;
                for (l, c) in self.0.labels().iter().zip(&self.0.x) {
                    m.serialize_entry(l, c)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("TraceTuple", 2)?;
        st.serialize_field("n", &self.arity())?;
        st.serialize_field("x", &Coords(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for TraceTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coords {
            Map(BTreeMap<String, CycNum>),
            List(Vec<CycNum>),
        }
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            x: Coords,
        }
        let raw = Raw::deserialize(d)?;
        let labels: &[&str] = match raw.n {
            2 => &LABELS2,
            3 => &LABELS3,
            n => return Err(de::Error::custom(format!("unsupported rank {n}"))),
        };
        let x = match raw.x {
            Coords::List(v) => v,
            Coords::Map(mut m) => {
                let mut v = Vec::with_capacity(labels.len());
                for l in labels {
                    v.push(m.remove(*l).ok_or_else(|| de::Error::custom(format!("missing coordinate {l}")))?);
                }
                if let Some(k) = m.keys().next() {
                    return Err(de::Error::custom(format!("unexpected coordinate label {k}")));
                }
                v
            }
        };
        if x.len() != labels.len() {
            return Err(de::Error::custom(format!("expected {} coordinates, found {}", labels.len(), x.len())));
        }
        TraceTuple::new(x).map_err(de::Error::custom)
    }
}

/// Angles `theta` (in turns) reduced into `[0, 1)`; `theta` and `-theta`
/// describe the same parametrised point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngleVector {
    #[serde(with = "rat_list")]
    pub theta: Vec<Rat>,
}

impl AngleVector {
    pub fn new(theta: Vec<Rat>) -> Self {
        AngleVector { theta: theta.iter().map(frac_part).collect() }
    }

    pub fn negate(&self) -> Self {
        Self::new(self.theta.iter().map(|t| -t).collect())
    }

    /// The lexicographically smaller of `theta` and `-theta`.
    pub fn canonical(&self) -> Self {
        let n = self.negate();
        if n.theta < self.theta {
            n
        } else {
            self.clone()
        }
    }

    /// Equality up to global negation.
    pub fn same_point(&self, o: &Self) -> bool {
        self.canonical() == o.canonical()
    }
}

pub(crate) mod rat_list {
    use super::Rat;
    use crate::exactnum::{fmt_rat, parse_rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Fricke polynomial `x^2 + y^2 + z^2 - 2xyz`.
pub fn e_poly(x: &CycNum, y: &CycNum, z: &CycNum) -> CycNum {
    x.square() + y.square() + z.square() - (x * y * z).mul_int(2)
}

pub fn eval_e(p: &TraceTuple) -> Result<CycNum> {
    p.expect_arity(2)?;
    Ok(e_poly(&p.x[0], &p.x[1], &p.x[2]))
}

struct Vars<'a> {
    x1: &'a CycNum,
    x2: &'a CycNum,
    x3: &'a CycNum,
    a: &'a CycNum,
    b: &'a CycNum,
    c: &'a CycNum,
    d: &'a CycNum,
}

fn vars(p: &TraceTuple) -> Result<Vars<'_>> {
    p.expect_arity(3)?;
    let x = &p.x;
    Ok(Vars { x1: &x[0], x2: &x[1], x3: &x[2], a: &x[3], b: &x[4], c: &x[5], d: &x[6] })
}

/// Horowitz polynomial of a septuple.
pub fn eval_f(p: &TraceTuple) -> Result<CycNum> {
    Ok(f_poly(p.coords()))
}

pub(crate) fn f_poly(x: &[CycNum]) -> CycNum {
    let (x1, x2, x3, a, b, c, d) = (&x[0], &x[1], &x[2], &x[3], &x[4], &x[5], &x[6]);
    let squares = x.iter().fold(CycNum::zero(), |acc, v| acc + v.square());
    let x1x2 = x1 * x2;
    let quartic = (&x1x2 * x3 * d).mul_int(4);
    let cubic = &x1x2 * a + x1 * x3 * b + x1 * c * d + x2 * x3 * c + x2 * b * d + x3 * a * d;
    squares + quartic - cubic.mul_int(2) + (a * b * c).mul_int(2) - CycNum::one()
}

/// `G = 2 x1 x2 x3 + x123 - x3 x12 - x1 x23 - x2 x13`.
pub fn eval_g(p: &TraceTuple) -> Result<CycNum> {
    let v = vars(p)?;
    Ok((v.x1 * v.x2 * v.x3).mul_int(2) + v.d - v.x3 * v.a - v.x1 * v.c - v.x2 * v.b)
}

/// The seven generators of the ideal of cosine relations, in their listed order.
pub fn eval_x_generators(p: &TraceTuple) -> Result<Vec<CycNum>> {
    let v = vars(p)?;
    let (x2, x3, a, b, c, d) = (v.x2, v.x3, v.a, v.b, v.c, v.d);
    let one = CycNum::one();
    let half = |e: CycNum| e.mul_rat(&crate::exactnum::rat(1, 2));
    let d2 = d.square();
    let x2x3 = x2 * x3;
    let g1 = x3.square() - (x3 * a * d).mul_int(2) + a.square() + d2.clone() - one.clone();
    let g2 = x2.square() - (x2 * b * d).mul_int(2) + b.square() + d2.clone() - one.clone();
    let g3 = &x2x3 * &d2 + half(-&x2x3 - x2 * a * d - x3 * b * d + a * b - c * &d2 + c.clone());
    let g4 = v.x1 + &(&x2x3 * d).mul_int(2) - x2 * a - x3 * b - c * d;
    let g5 = x2 * a * c - (x2 * b * &d2).mul_int(2) + x2 * b + (x3 * a * &d2).mul_int(2) - x3 * a - x3 * b * c
        - a.square() * d
        + b.square() * d;
    let g6 = &x2x3 * a - (x2 * &d2 * d).mul_int(2) + x2 * d - x3 * c * d - a.square() * b
        + (a * c * &d2).mul_int(2)
        - a * c
        + b * &d2;
    let g7 = &x2x3 * c - x2 * b * d - x3 * a * d + half(a.square() + b.square() - c.square() - one) + d2;
    Ok(vec![g1, g2, g3, g4, g5, g6, g7])
}

pub fn in_vx(p: &TraceTuple) -> Result<bool> {
    Ok(eval_x_generators(p)?.iter().all(|g| g.is_zero()))
}

/// `(cos 2 pi t1, cos 2 pi t2, cos 2 pi (t1+t2))` or the seven cosines of
/// partial angle sums for three angles.
pub fn eval_pi(theta: &AngleVector) -> Result<TraceTuple> {
    let t = &theta.theta;
    let c = real_cos;
    match t.len() {
        2 => Ok(TraceTuple::from_vec(vec![c(&t[0]), c(&t[1]), c(&(&t[0] + &t[1]))])),
        3 => Ok(TraceTuple::from_vec(vec![
            c(&t[0]),
            c(&t[1]),
            c(&t[2]),
            c(&(&t[0] + &t[1])),
            c(&(&t[0] + &t[2])),
            c(&(&t[1] + &t[2])),
            c(&(&t[0] + &t[1] + &t[2])),
        ])),
        n => Err(Error::ArityMismatch { expected: 3, found: n }),
    }
}

/// Outcome of inverting the angle parametrisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PiPreimage {
    /// Rational angles, determined up to global sign.
    Angles { theta: AngleVector },
    /// The point is in the image but some angle is irrational.
    RealAngles,
}

/// Finds angles with `eval_pi(theta) = p` when `p` lies in the parametrised set.
///
/// Requires every coordinate in `[-1, 1]`. Returns `None` when `p` is off the
/// image (rank 2: `E(p) != 1`; rank 3: some relation generator is nonzero).
pub fn invert_pi(p: &TraceTuple) -> Result<Option<PiPreimage>> {
    for c in p.coords() {
        if c.abs_gt_one()? {
            return Err(Error::OutOfRange(format!("coordinate {c} is outside [-1, 1]")));
        }
    }
    let on_image = match p.arity() {
        2 => eval_e(p)?.is_one(),
        _ => in_vx(p)?,
    };
    if !on_image {
        return Ok(None);
    }
    let base = p.arity();
    let mut theta = Vec::with_capacity(base);
    for c in &p.coords()[..base] {
        match recognize_rational_angle(c)? {
            Some(q) => theta.push(q),
            None => return Ok(Some(PiPreimage::RealAngles)),
        }
    }
    // Resolve the sign of every angle after the first by matching all coordinates.
    let sign_choices = 1usize << (base - 1);
    for mask in 0..sign_choices {
        let mut t = theta.clone();
        for (k, ti) in t.iter_mut().enumerate().skip(1) {
            if mask & (1 << (k - 1)) != 0 {
                *ti = -ti.clone();
            }
        }
        let cand = AngleVector::new(t);
        if eval_pi(&cand)? == *p {
            return Ok(Some(PiPreimage::Angles { theta: cand.canonical() }));
        }
    }
    Err(Error::Degenerate(format!("no sign choice reproduces {p} although it satisfies the image equations")))
}

/// Positions (0-based) of the free coordinates of each pattern U_1..U_7.
pub const PATTERN_FREE: [[usize; 3]; 7] =
    [[0, 1, 3], [0, 2, 4], [1, 2, 5], [0, 5, 6], [1, 4, 6], [2, 3, 6], [3, 4, 5]];

/// Zero positions (1-based) of pattern `U_i`, `i` in 1..=7.
pub fn pattern_zero_set(i: usize) -> Vec<usize> {
    (1..=7).filter(|pos| !PATTERN_FREE[i - 1].contains(&(pos - 1))).collect()
}

/// Whether `p` has the zero pattern of `U_i`.
pub fn has_pattern(p: &TraceTuple, i: usize) -> bool {
    pattern_zero_set(i).iter().all(|&pos| p.coords()[pos - 1].is_zero())
}

/// The residual triple of `U_i` with the sign twist used for `U_7`, so that on
/// the pattern `F = E(residual) - 1`.
pub fn pattern_residual(p: &TraceTuple, i: usize) -> [CycNum; 3] {
    let f = PATTERN_FREE[i - 1];
    let x = p.coords();
    let z = if i == 7 { -&x[f[2]] } else { x[f[2]].clone() };
    [x[f[0]].clone(), x[f[1]].clone(), z]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "region", rename_all = "snake_case")]
pub enum RegionTag {
    /// At most one nonzero coordinate; `position` is 1-based, absent at the origin.
    Axis { position: Option<usize> },
    /// On the pattern of `U_index` with `E(residual) = 1`.
    BoundaryTetra { index: usize },
    /// In `V(X)` inside the cube; `theta` present when the angles are rational.
    ImagePi { theta: Option<AngleVector> },
    /// All relation generators vanish but some coordinate is outside `[-1, 1]`.
    Vx,
    /// `F = 0` only.
    Vf,
    Generic,
}

/// Every region tag that applies, most specific first.
pub fn region_tags(p: &TraceTuple) -> Result<Vec<RegionTag>> {
    p.expect_arity(3)?;
    let mut tags = Vec::new();
    if p.is_axis() {
        let position = p.coords().iter().position(|c| !c.is_zero()).map(|i| i + 1);
        tags.push(RegionTag::Axis { position });
    }
    for i in 1..=7 {
        if has_pattern(p, i) {
            let [x, y, z] = pattern_residual(p, i);
            if e_poly(&x, &y, &z).is_one() {
                tags.push(RegionTag::BoundaryTetra { index: i });
            }
        }
    }
    let vx = in_vx(p)?;
    if vx {
        if p.has_large_coordinate()? {
            tags.push(RegionTag::Vx);
        } else {
            let theta = match invert_pi(p)? {
                Some(PiPreimage::Angles { theta }) => Some(theta),
                _ => None,
            };
            tags.push(RegionTag::ImagePi { theta });
        }
    }
    if eval_f(p)?.is_zero() && !vx {
        tags.push(RegionTag::Vf);
    }
    if tags.is_empty() {
        tags.push(RegionTag::Generic);
    }
    Ok(tags)
}

/// Most specific region, with precedence Axis > BoundaryTetra > ImagePi.
pub fn region_of(p: &TraceTuple) -> Result<RegionTag> {
    Ok(region_tags(p)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoEdge {
    pub a: usize,
    pub b: usize,
    /// Label of the shared coordinate, e.g. "12".
    pub label: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoLine {
    pub label: &'static str,
    pub points: [usize; 3],
}

/// Incidence graph of the seven coordinate subspaces `U_1..U_7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoPlane {
    pub free_labels: Vec<[&'static str; 3]>,
    pub edges: Vec<FanoEdge>,
    pub lines: Vec<FanoLine>,
}

impl FanoPlane {
    pub fn edge(&self, a: usize, b: usize) -> Option<&FanoEdge> {
        self.edges.iter().find(|e| (e.a, e.b) == (a.min(b), a.max(b)))
    }
}

pub fn fano_graph() -> FanoPlane {
    let free_labels = PATTERN_FREE.iter().map(|f| f.map(|i| LABELS3[i])).collect();
    let mut edges = Vec::new();
    for a in 1..=7 {
        for b in a + 1..=7 {
            let shared: Vec<usize> =
                PATTERN_FREE[a - 1].iter().filter(|c| PATTERN_FREE[b - 1].contains(c)).copied().collect();
            if shared.len() == 1 {
                edges.push(FanoEdge { a, b, label: LABELS3[shared[0]] });
            }
        }
    }
    let lines = (0..7)
        .map(|c| {
            let pts: Vec<usize> = (1..=7).filter(|i| PATTERN_FREE[i - 1].contains(&c)).collect();
            FanoLine { label: LABELS3[c], points: [pts[0], pts[1], pts[2]] }
        })
        .collect();
    FanoPlane { free_labels, edges, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, sqrt_rat};
    use crate::sample;

    fn t(v: &[(i64, i64)]) -> TraceTuple {
        TraceTuple::from_ints_ratio(v).unwrap()
    }

    fn golden() -> CycNum {
        (CycNum::one() + sqrt_rat(&rat(5, 1)).unwrap()).mul_rat(&rat(1, 4))
    }

    #[test]
    fn e_examples() {
        assert_eq!(eval_e(&t(&[(1, 1), (1, 1), (1, 1)])).unwrap(), CycNum::one());
        assert_eq!(eval_e(&t(&[(1, 2), (1, 2), (1, 2)])).unwrap(), CycNum::from_ratio(1, 2));
        let p = TraceTuple::triple(CycNum::from_ratio(1, 2), golden(), golden()).unwrap();
        let expect = (CycNum::from_int(5) + sqrt_rat(&rat(5, 1)).unwrap()).mul_rat(&rat(1, 8));
        assert_eq!(eval_e(&p).unwrap(), expect);
        assert!(eval_e(&TraceTuple::zeros(3)).is_err());
    }

    #[test]
    fn f_examples() {
        assert_eq!(eval_f(&TraceTuple::zeros(3)).unwrap(), CycNum::from_int(-1));
        let p = eval_pi(&AngleVector::new(vec![rat(1, 6), rat(1, 6), rat(1, 6)])).unwrap();
        assert!(eval_f(&p).unwrap().is_zero());
        let q = t(&[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 2), (1, 2)]);
        assert!(eval_f(&q).unwrap().is_zero());
    }

    #[test]
    fn g_examples() {
        assert!(eval_g(&TraceTuple::zeros(3)).unwrap().is_zero());
        let p = t(&[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)]);
        assert!(eval_g(&p).unwrap().is_one());
        let q = eval_pi(&AngleVector::new(vec![rat(1, 5), rat(1, 7), rat(1, 11)])).unwrap();
        assert_eq!(q.conductor(), 385);
        assert!(q.check_limits(&Limits::default()).is_err());
        assert!(q.check_limits(&Limits::default().with_conductor_cap(400)).is_ok());
        assert!(eval_g(&q).unwrap().is_zero());
    }

    #[test]
    fn x_generator_examples() {
        let p = eval_pi(&AngleVector::new(vec![rat(1, 6), rat(1, 4), rat(1, 3)])).unwrap();
        assert!(eval_x_generators(&p).unwrap().iter().all(|g| g.is_zero()));
        let z = eval_x_generators(&TraceTuple::zeros(3)).unwrap();
        let expect: Vec<CycNum> = [(-1, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (-1, 2)]
            .iter()
            .map(|&(p, q)| CycNum::from_ratio(p, q))
            .collect();
        assert_eq!(z, expect);
        let ones = t(&[(1, 1); 7]);
        assert!(eval_x_generators(&ones).unwrap().iter().all(|g| g.is_zero()));
        // a point off the image: every generator evaluated by hand at (1/2, 0, ..., 0)
        let h = t(&[(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let g = eval_x_generators(&h).unwrap();
        assert_eq!(g[3], CycNum::from_ratio(1, 2));
        assert_eq!(g[0], CycNum::from_int(-1));
    }

    #[test]
    fn pi_examples() {
        let p = eval_pi(&AngleVector::new(vec![rat(0, 1), rat(0, 1)])).unwrap();
        assert_eq!(p, t(&[(1, 1), (1, 1), (1, 1)]));
        let p = eval_pi(&AngleVector::new(vec![rat(1, 3), rat(1, 3)])).unwrap();
        assert_eq!(p, t(&[(-1, 2), (-1, 2), (-1, 2)]));
        let p = eval_pi(&AngleVector::new(vec![rat(1, 4), rat(1, 4), rat(1, 4)])).unwrap();
        assert_eq!(p, t(&[(0, 1), (0, 1), (0, 1), (-1, 1), (-1, 1), (-1, 1), (0, 1)]));
    }

    #[test]
    fn invert_examples() {
        let p = t(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(
            invert_pi(&p).unwrap(),
            Some(PiPreimage::Angles { theta: AngleVector::new(vec![rat(0, 1), rat(0, 1)]) })
        );
        let th = AngleVector::new(vec![rat(1, 5), rat(1, 6), rat(1, 7)]);
        let p = eval_pi(&th).unwrap();
        match invert_pi(&p).unwrap() {
            Some(PiPreimage::Angles { theta }) => assert!(theta.same_point(&th)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(invert_pi(&t(&[(1, 2), (1, 2), (0, 1)])).unwrap(), None);
        assert!(invert_pi(&t(&[(2, 1), (0, 1), (0, 1)])).is_err());
    }

    #[test]
    fn invert_with_irrational_angle() {
        // x = 1/3 is not a rational-angle cosine; (1/3, 1, 1/3) has E = 1
        let p = t(&[(1, 3), (1, 1), (1, 3)]);
        assert_eq!(invert_pi(&p).unwrap(), Some(PiPreimage::RealAngles));
    }

    #[test]
    fn region_examples() {
        let p = t(&[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 3)]);
        assert_eq!(region_of(&p).unwrap(), RegionTag::Axis { position: Some(7) });
        let q = t(&[(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (1, 2), (1, 2)]);
        assert!(has_pattern(&q, 4));
        let tags = region_tags(&q).unwrap();
        assert!(!tags.iter().any(|t| matches!(t, RegionTag::BoundaryTetra { .. })));
        let c = |a: i64, b: i64| real_cos(&rat(a, b));
        let r = TraceTuple::new(vec![
            c(1, 5),
            c(1, 7),
            CycNum::zero(),
            real_cos(&(rat(1, 5) + rat(1, 7))),
            CycNum::zero(),
            CycNum::zero(),
            CycNum::zero(),
        ])
        .unwrap();
        assert_eq!(region_of(&r).unwrap(), RegionTag::BoundaryTetra { index: 1 });
    }

    #[test]
    fn pattern_seven_uses_twisted_e() {
        // (0,0,0,x,y,z,0) with E(x,y,-z) = 1 but E(x,y,z) = 1/2
        let p = t(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 2), (1, 2), (0, 1)]);
        assert!(eval_f(&p).unwrap().is_zero());
        assert_eq!(region_of(&p).unwrap(), RegionTag::BoundaryTetra { index: 7 });
    }

    #[test]
    fn f_restricts_to_e_on_patterns() {
        let mut rng = sample::rng(5);
        for _ in 0..50 {
            let r = sample::random_tuple(&mut rng, 3);
            for i in 1..=7 {
                let mut x = r.coords().to_vec();
                for pos in pattern_zero_set(i) {
                    x[pos - 1] = CycNum::zero();
                }
                let p = TraceTuple::new(x).unwrap();
                let [a, b, c] = pattern_residual(&p, i);
                assert_eq!(eval_f(&p).unwrap(), e_poly(&a, &b, &c) - CycNum::one(), "pattern {i}");
            }
        }
    }

    #[test]
    fn fano_examples() {
        let f = fano_graph();
        assert_eq!(f.lines.len(), 7);
        assert_eq!(f.edges.len(), 21);
        assert_eq!(f.edge(6, 1).unwrap().label, "12");
        // every pair of points lies on exactly one line
        for a in 1..=7 {
            for b in a + 1..=7 {
                let n = f.lines.iter().filter(|l| l.points.contains(&a) && l.points.contains(&b)).count();
                assert_eq!(n, 1);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = eval_pi(&AngleVector::new(vec![rat(1, 5), rat(1, 3), rat(1, 4)])).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"n":3,"x":{"1":"#));
        let back: TraceTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let short: TraceTuple = serde_json::from_str(r#"{"n":2,"x":{"1":"1/2","2":"cos(1/8)","12":"1/2"}}"#).unwrap();
        assert_eq!(short.coords()[1], real_cos(&rat(1, 8)));
        assert!(serde_json::from_str::<TraceTuple>(r#"{"n":2,"x":{"1":"1/2","2":"0"}}"#).is_err());
        assert!(serde_json::from_str::<TraceTuple>(r#"{"n":2,"x":["zeta(4,1)","0","0"]}"#).is_err());
    }
}
