//! SL(2) matrices over cyclotomic fields, the finite-subgroup catalog, group
//! closure, associated matrices of trace points and triangularizability.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autact::{alphabet, AutWord};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::exactnum::{recognize_rational_angle, root_of_unity, sqrt_rat, CycNum};
use crate::orbits::{enumerate_orbit, orbit_partition, summarize, Orbit, OrbitSummary};
use crate::tracepoints::{e_poly, TraceTuple};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
}

impl Mat2 {
    /// Checks `ad - bc = 1`.
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        if !m.det().is_one() {
            return Err(Error::DeterminantMismatch(format!("det {} != 1", m.det())));
        }
        Ok(m)
    }

    fn raw(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(CycNum::one(), CycNum::zero(), CycNum::zero(), CycNum::one())
    }

    pub fn diag(l: CycNum) -> Result<Self> {
        let li = l.inv()?;
        Ok(Self::raw(l, CycNum::zero(), CycNum::zero(), li))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn det(&self) -> CycNum {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> CycNum {
        &self.a + &self.d
    }

    pub fn half_trace(&self) -> CycNum {
        self.trace().mul_rat(&crate::exactnum::rat(1, 2))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn pow(&self, e: i64) -> Mat2 {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Mat2::identity(), |acc, _| acc.mul(&base))
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn apply(&self, v: &[CycNum; 2]) -> [CycNum; 2] {
        [&self.a * &v[0] + &self.b * &v[1], &self.c * &v[0] + &self.d * &v[1]]
    }

    pub fn conductor(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d].iter().fold(1u64, |l, x| num_integer::lcm(l, x.conductor() as u64))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type MatTuple = Vec<Mat2>;

/// Half-traces of the products `A_I` in coordinate order, not required real.
pub fn half_traces(m: &[Mat2]) -> Result<Vec<CycNum>> {
    match m {
        [a1, a2] => Ok(vec![a1.half_trace(), a2.half_trace(), a1.mul(a2).half_trace()]),
        [a1, a2, a3] => {
            let a12 = a1.mul(a2);
            Ok(vec![
                a1.half_trace(),
                a2.half_trace(),
                a3.half_trace(),
                a12.half_trace(),
                a1.mul(a3).half_trace(),
                a2.mul(a3).half_trace(),
                a12.mul(a3).half_trace(),
            ])
        }
        _ => Err(Error::ArityMismatch { expected: 3, found: m.len() }),
    }
}

/// The trace tuple of two or three matrices; every half-trace must be real.
pub fn trace_tuple(m: &[Mat2]) -> Result<TraceTuple> {
    TraceTuple::new(half_traces(m)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic(u32),
    BinaryDihedral(u32),
    BT24,
    BO48,
    BI120,
}

impl GroupKind {
    pub fn order(self) -> usize {
        match self {
            GroupKind::Cyclic(m) => m as usize,
            GroupKind::BinaryDihedral(n) => 4 * n as usize,
            GroupKind::BT24 => 24,
            GroupKind::BO48 => 48,
            GroupKind::BI120 => 120,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(m) => write!(f, "C{m}"),
            GroupKind::BinaryDihedral(n) => write!(f, "BD{}", 4 * n),
            GroupKind::BT24 => write!(f, "BT24"),
            GroupKind::BO48 => write!(f, "BO48"),
            GroupKind::BI120 => write!(f, "BI120"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        let num = |p: &str| {
            up[p.len()..].parse::<u32>().map_err(|_| Error::Parse(format!("bad group parameter in `{s}`")))
        };
        match up.as_str() {
            "BT24" => Ok(GroupKind::BT24),
            "BO48" => Ok(GroupKind::BO48),
            "BI120" => Ok(GroupKind::BI120),
            _ if up.starts_with("BD") => {
                let order = num("BD")?;
                if order == 0 || order % 4 != 0 {
                    return Err(Error::Parse(format!("binary dihedral order must be a positive multiple of 4: `{s}`")));
                }
                Ok(GroupKind::BinaryDihedral(order / 4))
            }
            _ if up.starts_with('C') => match num("C")? {
                0 => Err(Error::Parse("cyclic order must be positive".into())),
                m => Ok(GroupKind::Cyclic(m)),
            },
            _ => Err(Error::Parse(format!("unknown group `{s}`"))),
        }
    }
}

fn i_unit() -> CycNum {
    CycNum::zeta(4, 1)
}

/// Generators of a catalog group.
pub fn catalog_group(kind: GroupKind) -> Result<Vec<Mat2>> {
    let half = CycNum::from_ratio(1, 2);
    let i = i_unit();
    let one = CycNum::one();
    let b = Mat2::from_ints(0, 1, -1, 0)?;
    match kind {
        GroupKind::Cyclic(m) if m >= 1 => Ok(vec![Mat2::diag(CycNum::zeta(m, 1))?]),
        GroupKind::BinaryDihedral(n) if n >= 1 => Ok(vec![Mat2::diag(CycNum::zeta(2 * n, 1))?, b]),
        GroupKind::BT24 | GroupKind::BO48 => {
            let t = Mat2::new(
                (&one + &i) * &half,
                (&i - &one) * &half,
                (&one + &i) * &half,
                (&one - &i) * &half,
            )?;
            let mut g = vec![Mat2::diag(i.clone())?, b, t];
            if kind == GroupKind::BO48 {
                g.push(Mat2::diag(CycNum::zeta(8, 1))?);
            }
            Ok(g)
        }
        GroupKind::BI120 => {
            let e = |k| CycNum::zeta(5, k);
            let r5 = sqrt_rat(&crate::exactnum::rat(5, 1))?;
            let s = r5.inv()?;
            let t = Mat2::new(
                (e(4) - e(1)) * &s,
                (e(2) - e(3)) * &s,
                (e(2) - e(3)) * &s,
                (e(1) - e(4)) * &s,
            )?;
            Ok(vec![Mat2::new(e(3), CycNum::zero(), CycNum::zero(), e(2))?, b, t])
        }
        _ => Err(Error::Precondition(format!("invalid group parameter for {kind}"))),
    }
}

#[derive(Clone, Debug)]
pub enum Closure {
    Finite(Vec<Mat2>),
    ExceededBound,
}

impl Closure {
    pub fn elements(&self) -> Option<&[Mat2]> {
        match self {
            Closure::Finite(v) => Some(v),
            Closure::ExceededBound => None,
        }
    }
}

/// Breadth-first closure under right multiplication by the generators and
/// their inverses; identity first.
pub fn closure(gens: &[Mat2], bound: usize) -> Result<Closure> {
    if bound == 0 {
        return Err(Error::Precondition("closure bound must be at least 1".into()));
    }
    let mut step: Vec<Mat2> = Vec::new();
    for g in gens {
        if !g.det().is_one() {
            return Err(Error::DeterminantMismatch(format!("generator {g} has det != 1")));
        }
        step.push(g.clone());
        step.push(g.inverse());
    }
    let mut elems = vec![Mat2::identity()];
    let mut seen: HashSet<Mat2> = HashSet::from([Mat2::identity()]);
    let mut k = 0;
    while k < elems.len() {
        for s in &step {
            let m = elems[k].mul(s);
            if !seen.contains(&m) {
                if elems.len() >= bound {
                    return Ok(Closure::ExceededBound);
                }
                seen.insert(m.clone());
                elems.push(m);
            }
        }
        k += 1;
    }
    Ok(Closure::Finite(elems))
}

/// `sqrt(x^2 - 1)` inside a cyclotomic field when it can be found: for a
/// rational-angle cosine it is `zeta - x`, for rational `x^2 - 1` a Gauss sum.
pub fn sqrt_x2_minus_1(x: &CycNum) -> Option<CycNum> {
    if x.is_real() && x.abs_le_one().unwrap_or(false) {
        if let Ok(Some(q)) = recognize_rational_angle(x) {
            return Some(root_of_unity(&q) - x);
        }
    }
    let d = x.square() - CycNum::one();
    d.to_rat().and_then(|r| sqrt_rat(&r).ok())
}

/// The pair with `A1` diagonal, given `s = sqrt(x^2 - 1)` with `x != +-1`.
fn pair_diagonal(x: &CycNum, y: &CycNum, z: &CycNum, s: &CycNum) -> Result<(Mat2, Mat2)> {
    let s = s.mul_int(2);
    let (xx, yy, zz) = (x.mul_int(2), y.mul_int(2), z.mul_int(2));
    let four = CycNum::from_int(4);
    let lam = (&xx + &s).mul_rat(&crate::exactnum::rat(1, 2));
    let a1 = Mat2::diag(lam)?;
    let den = &xx * &xx - &four + &xx * &s;
    let a = (&xx * &zz + &zz * &s - yy.mul_int(2)).div(&den)?;
    let b = (&xx * &xx + &yy * &yy + &zz * &zz - &xx * &yy * &zz - &four).div(&(&four - &xx * &xx))?;
    let d = (-(&xx * &zz) - &zz * &s - yy.mul_int(2) + &xx * &xx * &yy + &xx * &yy * &s).div(&den)?;
    Ok((a1, Mat2::raw(a, b, CycNum::one(), d)))
}

/// A pair with half-traces `(x, y, z)`. Any of the three matrices `A1`, `A2`,
/// `A1 A2` may be the diagonal one; the choice with the smallest field is used.
fn pair_with_traces(x: &CycNum, y: &CycNum, z: &CycNum, limits: &Limits) -> Result<(Mat2, Mat2)> {
    let one = CycNum::one();
    let base = [x, y, z].iter().fold(1u64, |l, c| num_integer::lcm(l, c.conductor() as u64));
    let mut best: Option<(u64, usize, CycNum)> = None;
    for (role, c) in [x, y, z].into_iter().enumerate() {
        if *c == one || *c == -&one {
            continue;
        }
        if let Some(s) = sqrt_x2_minus_1(c) {
            let cond = num_integer::lcm(base, s.conductor() as u64);
            if best.as_ref().is_none_or(|b| cond < b.0) {
                best = Some((cond, role, s));
            }
        }
    }
    let Some((cond, role, s)) = best else {
        return Err(Error::NoCyclotomicSqrt(format!(
            "no coordinate of ({x}, {y}, {z}) gives sqrt(X^2 - 4) in a cyclotomic field"
        )));
    };
    if cond > limits.conductor_cap as u64 {
        return Err(Error::ConductorCap { conductor: cond, cap: limits.conductor_cap });
    }
    match role {
        0 => pair_diagonal(x, y, z, &s),
        1 => pair_diagonal(y, x, z, &s).map(|(b1, b2)| (b2, b1)),
        _ => {
            // (B1, B2) with half-traces (z, y, 2yz - x) gives (B1 B2^-1, B2)
            let w = (y * z).mul_int(2) - x;
            pair_diagonal(z, y, &w, &s).map(|(b1, b2)| (b1.mul(&b2.inverse()), b2))
        }
    }
}

/// Matrices `(A1, A2)` whose half-traces are `p`; requires `E(p) != 1`.
pub fn associated_matrices_2(p: &TraceTuple) -> Result<MatTuple> {
    associated_matrices_2_with(p, &Limits::default())
}

pub fn associated_matrices_2_with(p: &TraceTuple, limits: &Limits) -> Result<MatTuple> {
    p.expect_arity(2)?;
    let x = p.coords();
    if e_poly(&x[0], &x[1], &x[2]).is_one() {
        return Err(Error::Degenerate(format!("{p} lies on E = 1; the pair is reducible")));
    }
    let (a1, a2) = pair_with_traces(&x[0], &x[1], &x[2], limits)?;
    let m = vec![a1, a2];
    verify_round_trip(&m, p)?;
    Ok(m)
}

fn verify_round_trip(m: &[Mat2], p: &TraceTuple) -> Result<()> {
    for a in m {
        if !a.det().is_one() {
            return Err(Error::DeterminantMismatch(format!("constructed matrix {a} has det {}", a.det())));
        }
    }
    if half_traces(m)? != p.coords() {
        return Err(Error::DeterminantMismatch(format!("constructed matrices do not reproduce {p}")));
    }
    Ok(())
}

/// Solves `M x = r` exactly by Gaussian elimination.
pub fn solve_linear(mut m: Vec<Vec<CycNum>>, mut r: Vec<CycNum>) -> Result<Vec<CycNum>> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {}", col + 1)))?;
        m.swap(col, piv);
        r.swap(col, piv);
        let inv = m[col][col].inv()?;
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        r[col] = &r[col] * &inv;
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[i][j] = &m[i][j] - &t;
                }
                let t = &f * &r[col];
                r[i] = &r[i] - &t;
            }
        }
    }
    Ok(r)
}

/// Matrices `(A1, A2, A3)` whose half-traces are `p`. `A1, A2` come from the
/// pair construction; `A3` is the solution of the four affine trace conditions.
pub fn associated_matrices_3(p: &TraceTuple) -> Result<MatTuple> {
    associated_matrices_3_with(p, &Limits::default())
}

pub fn associated_matrices_3_with(p: &TraceTuple, limits: &Limits) -> Result<MatTuple> {
    p.expect_arity(3)?;
    let x = p.coords();
    if e_poly(&x[0], &x[1], &x[3]).is_one() {
        return Err(Error::Degenerate(format!(
            "E(x1, x2, x12) = 1 at {p}: A1, A2 are simultaneously triangular and the trace system is singular"
        )));
    }
    let (a1, a2) = pair_with_traces(&x[0], &x[1], &x[3], limits)?;
    let a12 = a1.mul(&a2);
    // tr(M A3) = m11 e + m21 f + m12 g + m22 h for A3 = [[e, f], [g, h]]
    let row = |m: &Mat2| vec![m.a.clone(), m.c.clone(), m.b.clone(), m.d.clone()];
    let sys = vec![row(&Mat2::identity()), row(&a1), row(&a2), row(&a12)];
    let rhs = vec![x[2].mul_int(2), x[4].mul_int(2), x[5].mul_int(2), x[6].mul_int(2)];
    let sol = solve_linear(sys, rhs).map_err(|e| match e {
        Error::SingularSystem(w) => Error::SingularSystem(format!("I, A1, A2, A1A2 are dependent at {p} ({w})")),
        e => e,
    })?;
    let a3 = Mat2::raw(sol[0].clone(), sol[1].clone(), sol[2].clone(), sol[3].clone());
    if !a3.det().is_one() {
        return Err(Error::DeterminantMismatch(format!(
            "solved A3 has det {} (F(p) != 0 or the point is not a trace septuple)",
            a3.det()
        )));
    }
    let m = vec![a1, a2, a3];
    verify_round_trip(&m, p)?;
    Ok(m)
}

fn is_eigenvector(m: &Mat2, v: &[CycNum; 2]) -> bool {
    let w = m.apply(v);
    (&w[0] * &v[1] - &w[1] * &v[0]).is_zero()
}

fn eigenvectors(m: &Mat2) -> Result<Vec<[CycNum; 2]>> {
    let x = m.half_trace();
    let s = sqrt_x2_minus_1(&x).ok_or_else(|| {
        Error::NoCyclotomicSqrt(format!("eigenvalues of {m} are not in a cyclotomic field reachable here"))
    })?;
    let mut out = Vec::new();
    for lam in [&x + &s, &x - &s] {
        // kernel of M - lam I
        let (p, q) = (&m.a - &lam, m.b.clone());
        let v = if !p.is_zero() || !q.is_zero() {
            [q, -p]
        } else {
            let (r, t) = (m.c.clone(), &m.d - &lam);
            if !r.is_zero() || !t.is_zero() {
                [t, -r]
            } else {
                [CycNum::one(), CycNum::zero()]
            }
        };
        if !out.iter().any(|u: &[CycNum; 2]| (&u[0] * &v[1] - &u[1] * &v[0]).is_zero()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// A common eigenvector of all matrices, if one exists.
pub fn is_upper_triangularizable(m: &[Mat2]) -> Result<Option<[CycNum; 2]>> {
    let Some(pivot) = m.iter().find(|a| !a.is_scalar()) else {
        return Ok(Some([CycNum::one(), CycNum::zero()]));
    };
    for v in eigenvectors(pivot)? {
        if m.iter().all(|a| is_eigenvector(a, &v)) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Elements of a closed group with multiplication table and half-trace ids.
pub struct CayleyTable {
    pub elements: Vec<Mat2>,
    pub table: Vec<Vec<u16>>,
    pub trace_id: Vec<u16>,
    pub trace_values: Vec<CycNum>,
}

impl CayleyTable {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let gens = catalog_group(kind)?;
        let elements = match closure(&gens, kind.order().max(1))? {
            Closure::Finite(v) => v,
            Closure::ExceededBound => return Err(Error::ClosureBound { bound: kind.order() }),
        };
        let index: HashMap<&Mat2, u16> = elements.iter().enumerate().map(|(i, m)| (m, i as u16)).collect();
        let table = elements
            .par_iter()
            .map(|a| elements.iter().map(|b| index[&a.mul(b)]).collect())
            .collect();
        let mut trace_values: Vec<CycNum> = Vec::new();
        let mut trace_id = Vec::new();
        for e in &elements {
            let t = e.half_trace();
            let id = match trace_values.iter().position(|v| *v == t) {
                Some(i) => i,
                None => {
                    trace_values.push(t);
                    trace_values.len() - 1
                }
            };
            trace_id.push(id as u16);
        }
        Ok(CayleyTable { elements, table, trace_id, trace_values })
    }

    fn tuple_ids(&self, i: usize, j: usize, k: usize) -> [u16; 7] {
        let t = &self.table;
        let h = |e: u16| self.trace_id[e as usize];
        let ij = t[i][j];
        [
            h(i as u16),
            h(j as u16),
            h(k as u16),
            h(ij),
            h(t[i][k]),
            h(t[j][k]),
            h(t[ij as usize][k]),
        ]
    }
}

/// Distinct trace septuples over all triples of group elements, in first-seen
/// order of the triples.
pub fn triple_trace_points(kind: GroupKind) -> Result<Vec<TraceTuple>> {
    let ct = CayleyTable::new(kind)?;
    let n = ct.elements.len();
    let per_i: Vec<Vec<[u16; 7]>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for j in 0..n {
                for k in 0..n {
                    let ids = ct.tuple_ids(i, j, k);
                    if seen.insert(ids) {
                        out.push(ids);
                    }
                }
            }
            out
        })
        .collect();
    let mut seen = HashSet::new();
    let mut pts = Vec::new();
    for ids in per_i.into_iter().flatten() {
        if seen.insert(ids) {
            let v = ids.iter().map(|&t| ct.trace_values[t as usize].clone()).collect();
            pts.push(TraceTuple::new(v)?);
        }
    }
    Ok(pts)
}

/// The orbits of the rank-3 action on all trace septuples of triples from a
/// catalog group.
pub fn triple_orbits(kind: GroupKind, bound: usize) -> Result<Vec<Orbit>> {
    orbit_partition(&triple_trace_points(kind)?, alphabet(3), bound)
}

pub fn triple_inventory(kind: GroupKind, bound: usize) -> Result<Vec<OrbitSummary>> {
    Ok(triple_orbits(kind, bound)?.iter().map(summarize).collect())
}

/// A word moving `p` to a point with a coordinate equal to 1, found by
/// scanning the enumerated orbit.
pub fn entry_one_in_orbit(p: &TraceTuple, bound: usize) -> Result<Option<AutWord>> {
    let o = enumerate_orbit(p, alphabet(p.arity()), bound)?;
    if !o.exhausted {
        return Err(Error::NotExhausted { bound });
    }
    match o.points.iter().position(|q| q.coords().iter().any(|c| c.is_one())) {
        Some(i) => Ok(Some(o.word_to(i)?)),
        None => Ok(None),
    }
}
