//! Classification of trace points by orbit finiteness, with certificates that
//! can be re-checked independently of the pipeline that produced them.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::autact::{apply_gen, apply_word, AutWord, Letter, ALPHABET2, ALPHABET3, SIGMA1, SIGMA2};
use crate::error::{Error, Result};
use crate::exactnum::{recognize_rational_angle, CycNum};
use crate::limits::Limits;
use crate::matgroups::{associated_matrices_2_with, associated_matrices_3_with, closure, entry_one_in_orbit, is_upper_triangularizable, trace_tuple, Closure, GroupKind, Mat2};
use crate::orbits::{enumerate_orbit, finite_orbit_seeds};
use crate::quadforms::escape_large_coordinate;
use crate::tracepoints::{eval_e, eval_f, eval_pi, invert_pi, region_tags, AngleVector, PiPreimage, RegionTag, TraceTuple};

/// Which case of the classification a point falls in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Case {
    Axis,
    /// Rank 2, `E = 1` inside the cube; `theta` is absent for irrational angles.
    E1Triangular { theta: Option<AngleVector>, real_angles: bool },
    BoundaryTetra { index: usize },
    ImagePi { theta: Option<AngleVector> },
    FiniteGroup { group: Option<GroupKind>, orbit: Option<String>, orbit_size: Option<usize> },
    InfiniteOrbit,
    Unknown,
}

/// Letter `sigma` fixing coordinate `fixed` of `(p)prefix` and acting on the
/// other two by a linear map of infinite order on that pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rotation {
    pub prefix: AutWord,
    pub letter: AutWord,
    pub fixed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Axis,
    /// `eval_pi(theta) = p`.
    Angles { theta: AngleVector },
    /// The orbit of `p` has exactly `size` points, all at `level`.
    Orbit { size: usize, level: CycNum },
    Rotation(Rotation),
    /// `(p)word` has a coordinate outside `[-1, 1]`, followed by a rotation.
    Escape { word: AutWord, rotation: Rotation },
    /// A coordinate of `(p)prefix` is not `cos(2 pi q)` for rational `q`
    /// while `p` is off the axes.
    NonCosine { prefix: AutWord, index: usize },
    /// Matrices with half-traces `(p)prefix` generating a group of `order`.
    GroupClosure { prefix: AutWord, matrices: Vec<Mat2>, order: usize, group: GroupKind },
    /// Orbit enumeration stopped at `explored` points with no witness.
    Bounded { explored: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub point: TraceTuple,
    #[serde(flatten)]
    pub case: Case,
    /// `None` when undecided.
    pub finite_orbit: Option<bool>,
    pub certificates: Vec<Certificate>,
    /// Other region labels that also apply.
    pub also: Vec<String>,
    /// Set when the verdict rests on a bound rather than a witness.
    pub heuristic: bool,
}

impl Verdict {
    fn new(p: &TraceTuple, case: Case, finite: Option<bool>, certificates: Vec<Certificate>) -> Self {
        Verdict { point: p.clone(), case, finite_orbit: finite, certificates, also: Vec::new(), heuristic: false }
    }

    fn with_also(mut self, also: Vec<String>) -> Self {
        self.also = also;
        self
    }

    /// Re-checks every certificate against the point.
    pub fn verify(&self, limits: &Limits) -> Result<bool> {
        for c in &self.certificates {
            if !verify_certificate(&self.point, c, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn tag_name(t: &RegionTag) -> String {
    match t {
        RegionTag::Axis { .. } => "axis".into(),
        RegionTag::BoundaryTetra { index } => format!("boundary_tetra({index})"),
        RegionTag::ImagePi { .. } => "image_pi".into(),
        RegionTag::Vx => "vx".into(),
        RegionTag::Vf => "vf".into(),
        RegionTag::Generic => "generic".into(),
    }
}

fn is_rational_cosine(c: &CycNum) -> Result<bool> {
    if !c.abs_le_one()? {
        return Ok(false);
    }
    Ok(recognize_rational_angle(c)?.is_some())
}

/// The two rank-2 letters with a fixed coordinate: `sigma_1` fixes `y`,
/// `sigma_2` fixes `x`.
const ROTATION_LETTERS: [(Letter, usize); 2] = [(SIGMA1, 1), (SIGMA2, 0)];

/// Whether `letter` at `q` fixes coordinate `fixed` and moves the other pair
/// along an infinite orbit. The pair transforms by a 2x2 matrix of trace
/// `2c`, `c = q[fixed]`: infinite order unless `c` is a rational-angle cosine;
/// for `c = +-1` the pair is periodic only on the line `z = xy`.
fn rotation_holds(q: &TraceTuple, letter: Letter, fixed: usize) -> Result<bool> {
    let img = apply_gen(q, letter)?;
    let x = q.coords();
    if img.coords()[fixed] != x[fixed] {
        return Ok(false);
    }
    let others: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
    if others.iter().all(|&i| x[i].is_zero()) {
        return Ok(false);
    }
    let c = &x[fixed];
    if c.abs_real()?.is_one() {
        return Ok(x[2] != &x[0] * &x[1]);
    }
    Ok(!is_rational_cosine(c)?)
}

fn rotation_at(q: &TraceTuple) -> Result<Option<(Letter, usize)>> {
    for (l, i) in ROTATION_LETTERS {
        if rotation_holds(q, l, i)? {
            return Ok(Some((l, i)));
        }
    }
    Ok(None)
}

/// Searches the ball of radius `depth` around `p` for a rotation witness.
fn find_rotation(p: &TraceTuple, depth: usize) -> Result<Option<Rotation>> {
    let bound = 6usize.pow(depth as u32).max(1) * 2;
    let o = enumerate_orbit(p, &ALPHABET2, bound)?;
    for (i, q) in o.points.iter().enumerate() {
        if let Some((l, fixed)) = rotation_at(q)? {
            return Ok(Some(Rotation { prefix: o.word_to(i)?, letter: AutWord::new(2, [l])?, fixed }));
        }
    }
    Ok(None)
}

fn non_cosine_index(q: &TraceTuple) -> Result<Option<usize>> {
    for (i, c) in q.coords().iter().enumerate() {
        if !is_rational_cosine(c)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Names the finite subgroup of SL(2, C) from its elements.
pub fn identify_group(gens: &[Mat2], elements: &[Mat2]) -> Result<GroupKind> {
    let n = elements.len();
    let abelian = gens.iter().all(|a| gens.iter().all(|b| a.mul(b) == b.mul(a)));
    if abelian {
        return Ok(GroupKind::Cyclic(n as u32));
    }
    let mut max_order = 1usize;
    for m in elements {
        let q = recognize_rational_angle(&m.half_trace())?
            .ok_or_else(|| Error::Precondition(format!("element {m} of a finite group has no rational angle")))?;
        max_order = max_order.max(q.denom().try_into().unwrap_or(usize::MAX));
    }
    if n % 4 == 0 && max_order == n / 2 {
        return Ok(GroupKind::BinaryDihedral((n / 4) as u32));
    }
    match n {
        24 => Ok(GroupKind::BT24),
        48 => Ok(GroupKind::BO48),
        120 => Ok(GroupKind::BI120),
        _ => Err(Error::Precondition(format!("non-abelian group of order {n} is not a finite subgroup of SL(2, C)"))),
    }
}

fn group_certificate(prefix: AutWord, m: Vec<Mat2>, bound: usize) -> Result<Option<Certificate>> {
    match closure(&m, bound)? {
        Closure::Finite(elts) => {
            let group = identify_group(&m, &elts)?;
            Ok(Some(Certificate::GroupClosure { prefix, order: elts.len(), matrices: m, group }))
        }
        Closure::ExceededBound => Ok(None),
    }
}

/// Id of the listed finite orbit containing `p`, with its group.
fn listed_orbit(orbit: &crate::orbits::Orbit) -> Option<(&'static str, GroupKind)> {
    finite_orbit_seeds().into_iter().find(|(_, s)| orbit.contains(s)).map(|(id, _)| {
        let kind = match id {
            "O2" => GroupKind::BO48,
            "O4" => GroupKind::BT24,
            _ => GroupKind::BI120,
        };
        (id, kind)
    })
}

/// Classifies a point of the rank-2 trace space.
pub fn classify2(p: &TraceTuple, limits: &Limits) -> Result<Verdict> {
    p.expect_arity(2)?;
    p.check_limits(limits)?;
    if p.is_axis() {
        return Ok(Verdict::new(p, Case::Axis, Some(true), vec![Certificate::Axis]));
    }
    let e = eval_e(p)?;
    let inside = !p.has_large_coordinate()?;
    let e_cmp = e.cmp_real(&CycNum::one())?;
    if e_cmp == Ordering::Equal && inside {
        return match invert_pi(p)? {
            Some(PiPreimage::Angles { theta }) => Ok(Verdict::new(
                p,
                Case::E1Triangular { theta: Some(theta.clone()), real_angles: false },
                Some(true),
                vec![Certificate::Angles { theta }],
            )),
            _ => {
                let cert = infinite_certificate2(p)?;
                Ok(Verdict::new(p, Case::E1Triangular { theta: None, real_angles: true }, Some(false), vec![cert]))
            }
        };
    }
    if e_cmp == Ordering::Greater && inside {
        let word = escape_large_coordinate(p, limits.escape_depth)?;
        let q = apply_word(p, &word)?;
        let r = find_rotation(&q, 3)?.ok_or_else(|| Error::SearchCap(format!("no rotation witness near {q}")))?;
        let rotation = Rotation { prefix: word.concat(&r.prefix)?, letter: r.letter, fixed: r.fixed };
        return Ok(Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::Escape { word, rotation }]));
    }
    if !inside {
        let cert = infinite_certificate2(p)?;
        let also = if e_cmp == Ordering::Equal { vec!["e1_cone".to_string()] } else { vec![] };
        return Ok(Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![cert]).with_also(also));
    }
    // E < 1 inside the cube
    if let Some(r) = find_rotation(p, 1)? {
        return Ok(Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::Rotation(r)]));
    }
    let o = enumerate_orbit(p, &ALPHABET2, limits.orbit_bound)?;
    if o.exhausted {
        let listed = listed_orbit(&o);
        let mut certs = vec![Certificate::Orbit { size: o.len(), level: e }];
        let mut group = listed.map(|l| l.1);
        if let Ok(m) = associated_matrices_2_with(p, limits) {
            if let Some(c) = group_certificate(AutWord::empty(2), m, limits.closure_bound)? {
                if let Certificate::GroupClosure { group: g, .. } = &c {
                    group = Some(*g);
                }
                certs.push(c);
            }
        }
        let case = Case::FiniteGroup { group, orbit: listed.map(|l| l.0.to_string()), orbit_size: Some(o.len()) };
        return Ok(Verdict::new(p, case, Some(true), certs));
    }
    for (i, q) in o.points.iter().enumerate() {
        if let Some((l, fixed)) = rotation_at(q)? {
            let r = Rotation { prefix: o.word_to(i)?, letter: AutWord::new(2, [l])?, fixed };
            return Ok(Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::Rotation(r)]));
        }
    }
    let mut v = Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::Bounded { explored: o.len() }]);
    v.heuristic = true;
    Ok(v)
}

fn infinite_certificate2(p: &TraceTuple) -> Result<Certificate> {
    if let Some(r) = find_rotation(p, 3)? {
        return Ok(Certificate::Rotation(r));
    }
    match non_cosine_index(p)? {
        Some(index) => Ok(Certificate::NonCosine { prefix: AutWord::empty(2), index }),
        None => Err(Error::SearchCap(format!("no infinite-orbit witness near {p}"))),
    }
}

/// Small search radius for region witnesses and associated matrices.
const NEAR_POINTS: usize = 256;

/// Classifies a point of the rank-3 trace space; requires `F(p) = 0`.
pub fn classify3(p: &TraceTuple, limits: &Limits) -> Result<Verdict> {
    p.expect_arity(3)?;
    p.check_limits(limits)?;
    if !eval_f(p)?.is_zero() {
        return Err(Error::Precondition(format!("F({p}) is not zero")));
    }
    let tags = region_tags(p)?;
    let also: Vec<String> = tags.iter().skip(1).map(tag_name).collect();
    match &tags[0] {
        RegionTag::Axis { .. } => return Ok(Verdict::new(p, Case::Axis, Some(true), vec![Certificate::Axis]).with_also(also)),
        RegionTag::BoundaryTetra { index } => return Ok(boundary_verdict(p, *index, limits)?.with_also(also)),
        RegionTag::ImagePi { theta: Some(theta) } => {
            let v = Verdict::new(p, Case::ImagePi { theta: Some(theta.clone()) }, Some(true), vec![Certificate::Angles { theta: theta.clone() }]);
            return Ok(v.with_also(also));
        }
        RegionTag::ImagePi { theta: None } => {
            let index = non_cosine_index(p)?.ok_or_else(|| Error::Degenerate(format!("{p} has real angles but only cosine coordinates")))?;
            let v = Verdict::new(p, Case::ImagePi { theta: None }, Some(false), vec![Certificate::NonCosine { prefix: AutWord::empty(3), index }]);
            return Ok(v.with_also(also));
        }
        _ => {}
    }
    if let Some(index) = non_cosine_index(p)? {
        let v = Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::NonCosine { prefix: AutWord::empty(3), index }]);
        return Ok(v.with_also(also));
    }
    let near = enumerate_orbit(p, &ALPHABET3, NEAR_POINTS.min(limits.orbit_bound))?;
    for (i, q) in near.points.iter().enumerate() {
        if let Some(index) = non_cosine_index(q)? {
            let v = Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::NonCosine { prefix: near.word_to(i)?, index }]);
            return Ok(v.with_also(also));
        }
        let m = match associated_matrices_3_with(q, limits) {
            Ok(m) => m,
            Err(Error::Degenerate(_) | Error::ConductorCap { .. } | Error::NoCyclotomicSqrt(_) | Error::DeterminantMismatch(_) | Error::SingularSystem(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some(c) = group_certificate(near.word_to(i)?, m, limits.closure_bound)? {
            let Certificate::GroupClosure { group, .. } = &c else { unreachable!() };
            let case = Case::FiniteGroup { group: Some(*group), orbit: None, orbit_size: near.exhausted.then_some(near.len()) };
            return Ok(Verdict::new(p, case, Some(true), vec![c]).with_also(also));
        }
        break;
    }
    let o = if near.exhausted { near } else { enumerate_orbit(p, &ALPHABET3, limits.orbit_bound)? };
    for (i, q) in o.points.iter().enumerate() {
        if let Some(index) = non_cosine_index(q)? {
            let v = Verdict::new(p, Case::InfiniteOrbit, Some(false), vec![Certificate::NonCosine { prefix: o.word_to(i)?, index }]);
            return Ok(v.with_also(also));
        }
    }
    if o.exhausted {
        let level = eval_f(p)?;
        let case = Case::FiniteGroup { group: None, orbit: None, orbit_size: Some(o.len()) };
        return Ok(Verdict::new(p, case, Some(true), vec![Certificate::Orbit { size: o.len(), level }]).with_also(also));
    }
    let mut v = Verdict::new(p, Case::Unknown, None, vec![Certificate::Bounded { explored: o.len() }]).with_also(also);
    v.heuristic = true;
    Ok(v)
}

/// On the pattern `U_i` with `E(residual) = 1`: move to `U_1`, where rational
/// angles give diagonal `A1, A2` and `A3 = [[0,1],[-1,0]]`.
fn boundary_verdict(p: &TraceTuple, index: usize, limits: &Limits) -> Result<Verdict> {
    let case = Case::BoundaryTetra { index };
    let near = enumerate_orbit(p, &ALPHABET3, NEAR_POINTS)?;
    for (i, q) in near.points.iter().enumerate() {
        if !crate::tracepoints::has_pattern(q, 1) {
            continue;
        }
        let x = q.coords();
        let residual = TraceTuple::triple(x[0].clone(), x[1].clone(), x[3].clone())?;
        if !eval_e(&residual)?.is_one() {
            continue;
        }
        let prefix = near.word_to(i)?;
        return match invert_pi(&residual)? {
            Some(PiPreimage::Angles { theta }) => {
                let d = |t: &crate::exactnum::Rat| Mat2::diag(crate::exactnum::root_of_unity(t));
                let m = vec![d(&theta.theta[0])?, d(&theta.theta[1])?, Mat2::from_ints(0, 1, -1, 0)?];
                if trace_tuple(&m)? != *q {
                    return Err(Error::Degenerate(format!("binary dihedral matrices do not reproduce {q}")));
                }
                let c = group_certificate(prefix, m, limits.closure_bound.max(8 * 64))?
                    .ok_or(Error::ClosureBound { bound: limits.closure_bound })?;
                Ok(Verdict::new(p, case, Some(true), vec![c]))
            }
            _ => {
                let idx = non_cosine_index(q)?.ok_or_else(|| Error::Degenerate(format!("{q} has real angles but only cosine coordinates")))?;
                Ok(Verdict::new(p, case, Some(false), vec![Certificate::NonCosine { prefix, index: idx }]))
            }
        };
    }
    Err(Error::SearchCap(format!("no point of pattern U_1 near {p}")))
}

/// Dispatches on arity.
pub fn classify(p: &TraceTuple, limits: &Limits) -> Result<Verdict> {
    match p.arity() {
        2 => classify2(p, limits),
        _ => classify3(p, limits),
    }
}

/// Classifies a batch; parallel across inputs unless `limits.deterministic`.
pub fn classify_batch(points: &[TraceTuple], limits: &Limits) -> Vec<Result<Verdict>> {
    if limits.deterministic {
        points.iter().map(|p| classify(p, limits)).collect()
    } else {
        points.par_iter().map(|p| classify(p, limits)).collect()
    }
}

/// Re-checks one certificate for `p` from scratch.
pub fn verify_certificate(p: &TraceTuple, c: &Certificate, limits: &Limits) -> Result<bool> {
    match c {
        Certificate::Axis => Ok(p.is_axis()),
        Certificate::Angles { theta } => Ok(eval_pi(theta)? == *p),
        Certificate::Orbit { size, level } => {
            let o = enumerate_orbit(p, crate::autact::alphabet(p.arity()), size + 1)?;
            let lv = if p.arity() == 2 { eval_e(p)? } else { eval_f(p)? };
            Ok(o.exhausted && o.len() == *size && lv == *level)
        }
        Certificate::Rotation(r) => verify_rotation(p, r),
        Certificate::Escape { word, rotation } => {
            if word.letters().len() > limits.escape_depth || !apply_word(p, word)?.has_large_coordinate()? {
                return Ok(false);
            }
            verify_rotation(p, rotation)
        }
        Certificate::NonCosine { prefix, index } => {
            let q = apply_word(p, prefix)?;
            Ok(!p.is_axis() && !is_rational_cosine(&q.coords()[*index])?)
        }
        Certificate::GroupClosure { prefix, matrices, order, group } => {
            let q = apply_word(p, prefix)?;
            if trace_tuple(matrices)? != q {
                return Ok(false);
            }
            match closure(matrices, order + 1)? {
                Closure::Finite(elts) => Ok(elts.len() == *order && identify_group(matrices, &elts)? == *group),
                Closure::ExceededBound => Ok(false),
            }
        }
        Certificate::Bounded { .. } => Ok(false),
    }
}

fn verify_rotation(p: &TraceTuple, r: &Rotation) -> Result<bool> {
    let [l] = r.letter.letters() else { return Ok(false) };
    if p.is_axis() {
        return Ok(false);
    }
    rotation_holds(&apply_word(p, &r.prefix)?, *l, r.fixed)
}

/// Outcome of the reduction step for tuples of more than three matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    AllTriplesTriangularizable,
    /// 1-based indices of a triple with no common eigenvector, its group order
    /// and a word giving an orbit point with a coordinate equal to 1.
    ReducibleAt { indices: [usize; 3], order: usize, entry_one: Option<AutWord> },
}

/// Checks each triple for a common eigenvector; the first triple without one
/// must generate a finite group, whose orbit supplies the entry-1 word.
pub fn reduce_n(m: &[Mat2], limits: &Limits) -> Result<Reduction> {
    if m.len() <= 3 {
        return Err(Error::Precondition(format!("reduce_n needs more than 3 matrices, got {}", m.len())));
    }
    let n = m.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let t = [m[i].clone(), m[j].clone(), m[k].clone()];
                if is_upper_triangularizable(&t)?.is_some() {
                    continue;
                }
                let order = match closure(&t, limits.closure_bound)? {
                    Closure::Finite(e) => e.len(),
                    Closure::ExceededBound => return Err(Error::ClosureBound { bound: limits.closure_bound }),
                };
                let entry_one = entry_one_in_orbit(&trace_tuple(&t)?, limits.orbit_bound)?;
                return Ok(Reduction::ReducibleAt { indices: [i + 1, j + 1, k + 1], order, entry_one });
            }
        }
    }
    Ok(Reduction::AllTriplesTriangularizable)
}
