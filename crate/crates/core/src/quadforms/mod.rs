//! Gram forms of trace points, the reflections they define, positive
//! definiteness, Cholesky factors, Coxeter types and the escape search.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::autact::{apply_gen, AutWord, ALPHABET2};
use crate::error::{Error, Result};
use crate::exactnum::{CycNum, Interval};
use crate::matgroups::Mat2;
use crate::tracepoints::{e_poly, TraceTuple};

pub type SqMat = Vec<Vec<CycNum>>;

pub fn identity(n: usize) -> SqMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }).collect()).collect()
}

pub fn mat_mul(a: &SqMat, b: &SqMat) -> SqMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(CycNum::zero(), |acc, k| if a[i][k].is_zero() || b[k][j].is_zero() { acc } else { acc + &a[i][k] * &b[k][j] }))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &SqMat) -> SqMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Determinant by cofactor expansion (sizes up to 4 here).
pub fn det(a: &SqMat) -> CycNum {
    let n = a.len();
    match n {
        0 => CycNum::one(),
        1 => a[0][0].clone(),
        2 => &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {
            let mut acc = CycNum::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: SqMat = (1..n).map(|i| (0..n).filter(|&k| k != j).map(|k| a[i][k].clone()).collect()).collect();
                let t = &a[0][j] * &det(&minor);
                acc = if j % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

/// A symmetric form with ones on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramForm {
    pub g: SqMat,
}

impl GramForm {
    pub fn new(g: SqMat) -> Result<Self> {
        let n = g.len();
        for (i, row) in g.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition("Gram matrix must be square".into()));
            }
            if !row[i].is_one() {
                return Err(Error::Precondition("Gram matrix must have ones on the diagonal".into()));
            }
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(Error::Precondition("Gram matrix must be symmetric".into()));
                }
            }
        }
        Ok(GramForm { g })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn det(&self) -> CycNum {
        det(&self.g)
    }

    /// Leading principal minors of sizes `1..=dim`.
    pub fn leading_minors(&self) -> Vec<CycNum> {
        (1..=self.dim())
            .map(|k| det(&self.g[..k].iter().map(|r| r[..k].to_vec()).collect()))
            .collect()
    }

    /// Form on `R^dim` whose Coxeter diagram has the given edge labels, with
    /// `g_ij = -cos(pi / m_ij)`.
    pub fn coxeter(dim: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut g = identity(dim);
        for &(i, j, m) in edges {
            let c = -crate::exactnum::real_cos(&crate::exactnum::rat(1, 2 * m as i64));
            g[i][j] = c.clone();
            g[j][i] = c;
        }
        Self::new(g)
    }
}

impl fmt::Display for GramForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.g {
            let r: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

fn twice_minus(a: &CycNum, b: &CycNum, ab: &CycNum) -> CycNum {
    (a * b).mul_int(2) - ab
}

/// `g_2 = (tr(A_i A_j^-1)/2)` for `A_0 = I`.
pub fn gram2(p: &TraceTuple) -> Result<GramForm> {
    p.expect_arity(2)?;
    let x = p.coords();
    let one = CycNum::one();
    let c = twice_minus(&x[0], &x[1], &x[2]);
    GramForm::new(vec![
        vec![one.clone(), x[0].clone(), x[1].clone()],
        vec![x[0].clone(), one.clone(), c.clone()],
        vec![x[1].clone(), c, one],
    ])
}

pub fn gram3(p: &TraceTuple) -> Result<GramForm> {
    p.expect_arity(3)?;
    let x = p.coords();
    let one = CycNum::one();
    let g12 = twice_minus(&x[0], &x[1], &x[3]);
    let g13 = twice_minus(&x[0], &x[2], &x[4]);
    let g23 = twice_minus(&x[1], &x[2], &x[5]);
    GramForm::new(vec![
        vec![one.clone(), x[0].clone(), x[1].clone(), x[2].clone()],
        vec![x[0].clone(), one.clone(), g12.clone(), g13.clone()],
        vec![x[1].clone(), g12, one.clone(), g23.clone()],
        vec![x[2].clone(), g13, g23, one],
    ])
}

/// `(tr(A_i A_j^-1)/2)` over `A_0 = I, A_1, ..., A_n`.
pub fn gram_of_matrices(m: &[Mat2]) -> Result<GramForm> {
    let mut all = vec![Mat2::identity()];
    all.extend(m.iter().cloned());
    let g = all.iter().map(|a| all.iter().map(|b| a.mul(&b.inverse()).half_trace()).collect()).collect();
    GramForm::new(g)
}

/// Reflections formed using `2g`, with pairwise product orders.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectionSet {
    pub gram: GramForm,
    pub r: Vec<SqMat>,
    /// Order of `R_i R_j`; `None` when above the cap.
    pub product_orders: Vec<Vec<Option<u32>>>,
}

/// `R_i` is the identity except row `i`, which is `-2 g_{i,*}` with `-1` on
/// the diagonal.
pub fn reflections_from(g: &GramForm, order_cap: u32) -> Result<ReflectionSet> {
    let n = g.dim();
    let two_g: SqMat = g.g.iter().map(|row| row.iter().map(|c| c.mul_int(2)).collect()).collect();
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = identity(n);
        for j in 0..n {
            m[i][j] = if i == j { CycNum::from_int(-1) } else { -&two_g[i][j] };
        }
        if mat_mul(&mat_mul(&transpose(&m), &g.g), &m) != g.g {
            return Err(Error::Precondition(format!("reflection {} does not preserve the form", i + 1)));
        }
        r.push(m);
    }
    let id = identity(n);
    let mut product_orders = vec![vec![Some(1); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let rr = mat_mul(&r[i], &r[j]);
            let mut acc = rr.clone();
            let mut ord = None;
            for k in 1..=order_cap {
                if acc == id {
                    ord = Some(k);
                    break;
                }
                acc = mat_mul(&acc, &rr);
            }
            product_orders[i][j] = ord;
            product_orders[j][i] = ord;
        }
    }
    Ok(ReflectionSet { gram: g.clone(), r, product_orders })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Definiteness {
    Positive { minors: Vec<CycNum> },
    /// `minor` is the size of the first leading minor that is not positive.
    NotPositive { minor: usize, value: CycNum },
}

impl Definiteness {
    pub fn is_positive(&self) -> bool {
        matches!(self, Definiteness::Positive { .. })
    }
}

/// Sylvester's criterion with exact signs.
pub fn is_positive_definite(g: &GramForm) -> Result<Definiteness> {
    let minors = g.leading_minors();
    for (k, m) in minors.iter().enumerate() {
        if m.signum_real()? != Ordering::Greater {
            return Ok(Definiteness::NotPositive { minor: k + 1, value: m.clone() });
        }
    }
    Ok(Definiteness::Positive { minors })
}

/// Lower-triangular factor with positive diagonal, as certified intervals.
#[derive(Clone, Debug)]
pub struct Cholesky {
    pub l: Vec<Vec<Interval>>,
}

impl Cholesky {
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.l.iter().map(|r| r.iter().map(|x| x.mid_f64()).collect()).collect()
    }

    /// Upper bound on `max |L L^T - g|` over the entries.
    pub fn residual(&self, g: &GramForm, prec: u32) -> f64 {
        let n = self.l.len();
        let mut worst = 0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = Interval::zero(prec);
                for k in 0..n {
                    s = s.add(&self.l[i][k].mul(&self.l[j][k]));
                }
                let d = s.sub(&g.g[i][j].numeric_embed(prec)).abs();
                worst = worst.max(d.hi_f64());
            }
        }
        worst
    }
}

fn interval_sqrt(x: &Interval) -> Result<Interval> {
    x.sqrt().ok_or_else(|| Error::OutOfRange("square root of a negative interval".into()))
}

/// Numeric Cholesky factor at `prec` bits; the form must be positive definite.
pub fn cholesky(g: &GramForm, prec: u32) -> Result<Cholesky> {
    if let Definiteness::NotPositive { minor, .. } = is_positive_definite(g)? {
        return Err(Error::NotPositiveDefinite { minor });
    }
    let n = g.dim();
    let gi: Vec<Vec<Interval>> = g.g.iter().map(|r| r.iter().map(|c| c.numeric_embed(prec)).collect()).collect();
    let mut l = vec![vec![Interval::zero(prec); n]; n];
    for j in 0..n {
        let mut s = gi[j][j].clone();
        for k in 0..j {
            s = s.sub(&l[j][k].mul(&l[j][k]));
        }
        l[j][j] = interval_sqrt(&s)?;
        for i in (j + 1)..n {
            let mut t = gi[i][j].clone();
            for k in 0..j {
                t = t.sub(&l[i][k].mul(&l[j][k]));
            }
            l[i][j] = t.div(&l[j][j]).ok_or_else(|| Error::NotPositiveDefinite { minor: j + 1 })?;
        }
    }
    Ok(Cholesky { l })
}

/// The closed-form factor of `g_3(p)` (with the corrected `W`); columns 3
/// and 4 carry negative diagonal entries, so it equals the Cholesky factor
/// with those two columns negated.
pub fn cholesky_closed_form(p: &TraceTuple, prec: u32) -> Result<Vec<Vec<Interval>>> {
    p.expect_arity(3)?;
    let x = p.coords();
    let (x1, x2, x3, x12, x13, x23) = (&x[0], &x[1], &x[2], &x[3], &x[4], &x[5]);
    let one = CycNum::one();
    let e = e_poly(x1, x2, x12);
    let dg = gram3(p)?.det();
    let w = -(x2 * x3) - x1 * x3 * x12 + x12 * x13 - x1 * x2 * x13 + (x1 * x1 * x2 * x3).mul_int(2) - x1 * x1 * x23 + x23;
    let emb = |c: &CycNum| c.numeric_embed(prec);
    let a = &one - &(x1 * x1);
    let b = &one - &e;
    let sa = interval_sqrt(&emb(&a))?;
    let sab = interval_sqrt(&emb(&(&a * &b)))?;
    let sbd = interval_sqrt(&emb(&(&b * &dg)))?;
    let div = |num: &Interval, den: &Interval| num.div(den).ok_or_else(|| Error::NotPositiveDefinite { minor: 3 });
    let z = Interval::zero(prec);
    Ok(vec![
        vec![emb(&one), z.clone(), z.clone(), z.clone()],
        vec![emb(x1), sa.clone(), z.clone(), z.clone()],
        vec![emb(x2), div(&emb(&(x1 * x2 - x12)), &sa)?, div(&sab, &emb(&-&a))?, z.clone()],
        vec![emb(x3), div(&emb(&(x1 * x3 - x13)), &sa)?, div(&emb(&w), &sab)?, div(&sbd, &emb(&-&b))?],
    ])
}

/// One connected component of the Coxeter graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterComponent {
    pub label: String,
    /// 1-based reflection indices.
    pub vertices: Vec<usize>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoxeterClass {
    Irreducible { label: String, rank: usize, order: u64 },
    Product { components: Vec<CoxeterComponent>, order: u64 },
    /// Some product order exceeds the cap, or a component is not a finite type.
    Infinite { reason: String },
}

fn component_type(verts: &[usize], m: &dyn Fn(usize, usize) -> u32) -> Option<(String, u64)> {
    let k = verts.len();
    let edges: Vec<(usize, usize, u32)> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let o = m(verts[a], verts[b]);
            (o > 2).then_some((a, b, o))
        })
        .collect();
    let mut deg = vec![0usize; k];
    for &(a, b, _) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let labels: Vec<u32> = edges.iter().map(|e| e.2).collect();
    let is_tree = edges.len() + 1 == k;
    match k {
        1 => Some(("A1".into(), 2)),
        2 => {
            let o = labels[0];
            let name = match o {
                3 => "A2".to_string(),
                4 => "B2".to_string(),
                6 => "G2".to_string(),
                _ => format!("I2({o})"),
            };
            Some((name, 2 * o as u64))
        }
        3 if is_tree => {
            let mut l = labels.clone();
            l.sort();
            match l.as_slice() {
                [3, 3] => Some(("A3".into(), 24)),
                [3, 4] => Some(("B3".into(), 48)),
                [3, 5] => Some(("H3".into(), 120)),
                _ => None,
            }
        }
        4 if is_tree => {
            if deg.contains(&3) {
                return labels.iter().all(|&o| o == 3).then(|| ("D4".into(), 192));
            }
            // a path: read labels from one end
            let end = (0..k).find(|&v| deg[v] == 1)?;
            let mut path = vec![end];
            while path.len() < k {
                let cur = *path.last()?;
                let next = edges.iter().find_map(|&(a, b, _)| {
                    if a == cur && !path.contains(&b) {
                        Some(b)
                    } else if b == cur && !path.contains(&a) {
                        Some(a)
                    } else {
                        None
                    }
                })?;
                path.push(next);
            }
            let lab = |a: usize, b: usize| edges.iter().find(|e| (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a)).map(|e| e.2);
            let seq: Vec<u32> = path.windows(2).map(|w| lab(w[0], w[1])).collect::<Option<_>>()?;
            let rev: Vec<u32> = seq.iter().rev().cloned().collect();
            let is = |s: &[u32]| seq == s || rev == s;
            if is(&[3, 3, 3]) {
                Some(("A4".into(), 120))
            } else if is(&[4, 3, 3]) {
                Some(("B4".into(), 384))
            } else if is(&[3, 4, 3]) {
                Some(("F4".into(), 1152))
            } else if is(&[5, 3, 3]) {
                Some(("H4".into(), 14400))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Coxeter type from the pairwise product orders; components are the
/// connected pieces of the graph with an edge where the form entry is nonzero.
pub fn coxeter_classify(rs: &ReflectionSet) -> CoxeterClass {
    let g = &rs.gram;
    let n = rs.r.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if rs.product_orders[i][j].is_none() {
                return CoxeterClass::Infinite { reason: format!("R{}R{} has order above the cap", i + 1, j + 1) };
            }
        }
    }
    let m = |i: usize, j: usize| rs.product_orders[i][j].expect("checked");
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = vec![];
        while let Some(v) = stack.pop() {
            members.push(v);
            for w in 0..n {
                if comp[w] == usize::MAX && !g.g[v][w].is_zero() {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort();
        comps.push(members);
    }
    let mut out = Vec::new();
    for c in &comps {
        match component_type(c, &m) {
            Some((label, order)) => out.push(CoxeterComponent { label, vertices: c.iter().map(|v| v + 1).collect(), order }),
            None => {
                return CoxeterClass::Infinite {
                    reason: format!("component {:?} is not a finite Coxeter type", c.iter().map(|v| v + 1).collect::<Vec<_>>()),
                }
            }
        }
    }
    let order = out.iter().map(|c| c.order).product();
    if out.len() == 1 {
        let c = out.pop().expect("one component");
        CoxeterClass::Irreducible { label: c.label, rank: c.vertices.len(), order }
    } else {
        CoxeterClass::Product { components: out, order }
    }
}

/// Order of the matrix group generated by the reflections, by closure.
pub fn reflection_group_order(rs: &ReflectionSet, bound: usize) -> Result<usize> {
    let n = rs.r.len();
    let id = identity(n);
    let mut seen: HashSet<SqMat> = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    let mut k = 0;
    while k < queue.len() {
        let cur = queue[k].clone();
        for r in &rs.r {
            let nx = mat_mul(&cur, r);
            if !seen.contains(&nx) {
                if seen.len() >= bound {
                    return Err(Error::ClosureBound { bound });
                }
                seen.insert(nx.clone());
                queue.push(nx);
            }
        }
        k += 1;
    }
    Ok(queue.len())
}

/// Standard Gram forms of the irreducible rank-4 finite Coxeter types.
pub fn standard_rank4(label: &str) -> Result<GramForm> {
    let path = |a: u32, b: u32, c: u32| vec![(0, 1, a), (1, 2, b), (2, 3, c)];
    let edges = match label {
        "A4" => path(3, 3, 3),
        "B4" => path(4, 3, 3),
        "D4" => vec![(0, 1, 3), (1, 2, 3), (1, 3, 3)],
        "F4" => path(3, 4, 3),
        "H4" => path(5, 3, 3),
        _ => return Err(Error::Parse(format!("unknown rank-4 type `{label}`"))),
    };
    GramForm::coxeter(4, &edges)
}

#[derive(Clone)]
struct Node {
    score: f64,
    depth: usize,
    point: TraceTuple,
    word: AutWord,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        self.score.total_cmp(&o.score).then_with(|| o.depth.cmp(&self.depth))
    }
}

fn max_abs_f64(p: &TraceTuple) -> f64 {
    p.to_f64().iter().fold(0f64, |m, v| m.max(v.abs()))
}

/// Best-first search for a word taking an admissible triple with `E > 1`
/// inside the cube to a triple with a coordinate of absolute value above 1.
pub fn escape_large_coordinate(t: &TraceTuple, max_depth: usize) -> Result<AutWord> {
    t.expect_arity(2)?;
    let x = t.coords();
    if x.iter().filter(|c| c.is_zero()).count() > 1 {
        return Err(Error::Precondition(format!("{t} is not admissible: more than one zero coordinate")));
    }
    if e_poly(&x[0], &x[1], &x[2]).cmp_real(&CycNum::one())? != Ordering::Greater {
        return Err(Error::Precondition(format!("E({t}) is not greater than 1")));
    }
    if t.has_large_coordinate()? {
        return Err(Error::Precondition(format!("{t} already has a coordinate outside [-1, 1]")));
    }
    const NODE_CAP: usize = 200_000;
    let mut heap = BinaryHeap::from([Node { score: max_abs_f64(t), depth: 0, point: t.clone(), word: AutWord::empty(2) }]);
    let mut seen: HashSet<TraceTuple> = HashSet::from([t.clone()]);
    while let Some(node) = heap.pop() {
        if node.depth >= max_depth {
            continue;
        }
        for &l in &ALPHABET2 {
            let q = apply_gen(&node.point, l)?;
            if !seen.insert(q.clone()) {
                continue;
            }
            let mut w = node.word.clone();
            w.push(l)?;
            if q.has_large_coordinate()? {
                return Ok(w);
            }
            if seen.len() > NODE_CAP {
                return Err(Error::SearchCap(format!("no escape from {t} within {NODE_CAP} nodes")));
            }
            heap.push(Node { score: max_abs_f64(&q), depth: node.depth + 1, point: q, word: w });
        }
    }
    Err(Error::SearchCap(format!("no escape from {t} within depth {max_depth}")))
}

#[cfg(test)]
mod tests;
