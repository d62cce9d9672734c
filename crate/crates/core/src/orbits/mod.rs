//! Orbit enumeration under trace-map generators, orbit statistics and
//! permutation-image orders.

pub mod perm;
pub mod schreier;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::autact::{act, AutWord, Letter};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, recognize_rational_angle, CycNum, Rat};
use crate::tracepoints::{eval_e, eval_f, TraceTuple};

pub use perm::Perm;
pub use schreier::{group_order, StabChain};

/// Frontiers smaller than this are expanded on the calling thread.
const PAR_FRONTIER: usize = 64;

/// A breadth-first closure of one point under an alphabet of letters.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub base: TraceTuple,
    /// Points in discovery order; `points[0]` is the base point.
    pub points: Vec<TraceTuple>,
    pub alphabet: Vec<Letter>,
    pub exhausted: bool,
    /// `images[k][i]`: index of `points[i]` under `alphabet[k]` (complete only
    /// when exhausted).
    images: Vec<Vec<u32>>,
    /// Discovering point and letter index, along the BFS tree.
    parent: Vec<Option<(u32, u8)>>,
    index: HashMap<TraceTuple, u32>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &TraceTuple) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &TraceTuple) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    /// The permutation of the point list induced by each letter.
    pub fn permutations(&self) -> Result<Vec<Perm>> {
        self.require_exhausted()?;
        Ok(self.images.iter().map(|img| Perm::from_images(img.clone())).collect())
    }

    /// A shortest word carrying the base point to `points[i]`.
    pub fn word_to(&self, i: usize) -> Result<AutWord> {
        let mut letters = Vec::new();
        let mut cur = i;
        while let Some((src, k)) = self.parent[cur] {
            letters.push(self.alphabet[k as usize]);
            cur = src as usize;
        }
        letters.reverse();
        AutWord::new(self.base.arity(), letters)
    }

    fn require_exhausted(&self) -> Result<()> {
        if self.exhausted {
            Ok(())
        } else {
            Err(Error::NotExhausted { bound: self.points.len() })
        }
    }
}

/// Breadth-first closure of `p` under `alphabet`, stopping once more than
/// `bound` points would be needed. Discovery order is deterministic: images of
/// a frontier are computed in parallel but merged in frontier order.
pub fn enumerate_orbit(p: &TraceTuple, alphabet: &[Letter], bound: usize) -> Result<Orbit> {
    if bound == 0 {
        return Err(Error::Precondition("orbit bound must be at least 1".into()));
    }
    for l in alphabet {
        if l.gen.rank() != p.arity() {
            return Err(Error::UnsupportedLetter { letter: l.to_string() });
        }
    }
    let mut points = vec![p.clone()];
    let mut index = HashMap::from([(p.clone(), 0u32)]);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); alphabet.len()];
    let mut parent = vec![None];
    let mut exhausted = true;
    let mut start = 0;
    'bfs: while start < points.len() {
        let end = points.len();
        let expand = |q: &TraceTuple| -> Vec<Vec<CycNum>> { alphabet.iter().map(|&l| act(q.coords(), l)).collect() };
        let new_images: Vec<Vec<Vec<CycNum>>> = if end - start >= PAR_FRONTIER {
            points[start..end].par_iter().map(expand).collect()
        } else {
            points[start..end].iter().map(expand).collect()
        };
        for (src, imgs) in (start..end).zip(new_images) {
            for (k, x) in imgs.into_iter().enumerate() {
                let q = TraceTuple::from_vec(x);
                let id = match index.get(&q) {
                    Some(&id) => id,
                    None => {
                        if points.len() >= bound {
                            exhausted = false;
                            break 'bfs;
                        }
                        let id = points.len() as u32;
                        index.insert(q.clone(), id);
                        points.push(q);
                        parent.push(Some((src as u32, k as u8)));
                        id
                    }
                };
                images[k].push(id);
            }
        }
        start = end;
    }
    if !exhausted {
        images.iter_mut().for_each(|v| v.clear());
    }
    Ok(Orbit { base: p.clone(), points, alphabet: alphabet.to_vec(), exhausted, images, parent, index })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitStats {
    pub size: usize,
    /// `E` for triples, `F` for septuples; constant on the orbit.
    pub level: CycNum,
    /// Distinct coordinate values in increasing order.
    pub inventory: Vec<CycNum>,
}

fn level_of(p: &TraceTuple) -> Result<CycNum> {
    if p.arity() == 2 {
        eval_e(p)
    } else {
        eval_f(p)
    }
}

pub fn orbit_stats(o: &Orbit) -> Result<OrbitStats> {
    o.require_exhausted()?;
    let level = level_of(&o.base)?;
    for q in &o.points {
        if level_of(q)? != level {
            return Err(Error::Precondition(format!("level not constant on the orbit of {}", o.base)));
        }
    }
    Ok(OrbitStats { size: o.len(), level, inventory: coordinate_values(o.points.iter())? })
}

/// Sorted distinct coordinate values over a set of tuples.
pub fn coordinate_values<'a>(pts: impl Iterator<Item = &'a TraceTuple>) -> Result<Vec<CycNum>> {
    let set: HashSet<&CycNum> = pts.flat_map(|p| p.coords().iter()).collect();
    let mut vals: Vec<CycNum> = set.into_iter().cloned().collect();
    let mut err = None;
    vals.sort_by(|a, b| {
        a.cmp_real(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            std::cmp::Ordering::Equal
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(vals),
    }
}

/// Counts of orbit points by the rotation number `rho` of one coordinate,
/// where the coordinate equals `cos(2 pi rho)` with `rho` in `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTable {
    pub label: String,
    pub rows: BTreeMap<Rat, usize>,
}

impl SliceTable {
    pub fn total(&self) -> usize {
        self.rows.values().sum()
    }

    /// CSV with a header line `rho,count`, rows by decreasing `rho`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("rho,count\n");
        for (rho, c) in self.rows.iter().rev() {
            s.push_str(&format!("{},{}\n", fmt_rat(rho), c));
        }
        s
    }
}

impl Serialize for SliceTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            rho: String,
            count: usize,
        }
        #[derive(Serialize)]
        struct Table {
            label: String,
            rows: Vec<Row>,
            total: usize,
        }
        Table {
            label: self.label.clone(),
            rows: self.rows.iter().rev().map(|(r, &count)| Row { rho: fmt_rat(r), count }).collect(),
            total: self.total(),
        }
        .serialize(s)
    }
}

pub fn slice_table(o: &Orbit, label: &str) -> Result<SliceTable> {
    o.require_exhausted()?;
    let pos = o
        .base
        .labels()
        .iter()
        .position(|&l| l == label)
        .ok_or_else(|| Error::Parse(format!("unknown coordinate label `{label}`")))?;
    let mut cache: HashMap<&CycNum, Rat> = HashMap::new();
    let mut rows = BTreeMap::new();
    for q in &o.points {
        let v = &q.coords()[pos];
        let rho = match cache.get(v) {
            Some(r) => r.clone(),
            None => {
                let r = recognize_rational_angle(v)?.ok_or_else(|| Error::Unrecognized(v.to_string()))?;
                cache.insert(v, r.clone());
                r
            }
        };
        *rows.entry(rho).or_insert(0) += 1;
    }
    Ok(SliceTable { label: label.to_string(), rows })
}

/// Order of the permutation group induced on an exhausted orbit.
pub fn perm_image_order(o: &Orbit, degree_cap: usize) -> Result<BigUint> {
    o.require_exhausted()?;
    if o.len() > degree_cap {
        return Err(Error::DegreeCap { degree: o.len(), cap: degree_cap });
    }
    Ok(group_order(&o.permutations()?))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub size: usize,
    pub representative: TraceTuple,
    /// A member with a coordinate equal to 1, if there is one.
    pub unit_point: Option<TraceTuple>,
}

/// Splits `points` into orbits, each enumerated to exhaustion, sorted by size
/// (ties keep first-seen order).
pub fn orbit_partition(points: &[TraceTuple], alphabet: &[Letter], bound: usize) -> Result<Vec<Orbit>> {
    let mut seen: HashSet<TraceTuple> = HashSet::new();
    let mut orbits = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let o = enumerate_orbit(p, alphabet, bound)?;
        o.require_exhausted()?;
        seen.extend(o.points.iter().cloned());
        orbits.push(o);
    }
    orbits.sort_by_key(|o| o.len());
    Ok(orbits)
}

pub fn orbit_inventory(points: &[TraceTuple], alphabet: &[Letter], bound: usize) -> Result<Vec<OrbitSummary>> {
    Ok(orbit_partition(points, alphabet, bound)?.iter().map(summarize).collect())
}

pub fn summarize(o: &Orbit) -> OrbitSummary {
    OrbitSummary {
        size: o.len(),
        representative: o.base.clone(),
        unit_point: o.points.iter().find(|p| p.coords().iter().any(|c| c.is_one())).cloned(),
    }
}

/// Typical points of the five finite rank-2 orbits off the axes and off
/// `E = 1`, in the order O_1..O_5.
pub fn finite_orbit_seeds() -> Vec<(&'static str, TraceTuple)> {
    let t = |a: &str, b: &str, c: &str| {
        let v: Vec<CycNum> = [a, b, c].iter().map(|s| crate::exactnum::parse_cyc(s).expect("valid")).collect();
        TraceTuple::new(v).expect("real triple")
    };
    vec![
        ("O1", t("1/2", "(sqrt(5)+1)/4", "(sqrt(5)+1)/4")),
        ("O2", t("sqrt(2)/2", "1/2", "sqrt(2)/2")),
        ("O3", t("1/2", "(sqrt(5)-1)/4", "(sqrt(5)+1)/4")),
        ("O4", t("1/2", "1/2", "1/2")),
        ("O5", t("1/2", "(1-sqrt(5))/4", "(1-sqrt(5))/4")),
    ]
}

/// Prime factorisation written as `2^16*3^4`; a cofactor without prime
/// factors below 10^4 is appended unfactored.
pub fn factor_string(n: &BigUint) -> String {
    if n.is_one() {
        return "1".into();
    }
    let mut rest = n.clone();
    let mut parts = Vec::new();
    for p in 2u32..10_000 {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        match e {
            0 => {}
            1 => parts.push(p.to_string()),
            _ => parts.push(format!("{p}^{e}")),
        }
        if rest.is_one() {
            break;
        }
    }
    if !rest.is_one() {
        parts.push(rest.to_string());
    }
    parts.join("*")
}

/// Inverse of [`factor_string`]; also accepts `·` as the product sign.
pub fn parse_factored(s: &str) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for f in s.split(['*', '·']) {
        let f = f.trim();
        let (b, e) = f.split_once('^').unwrap_or((f, "1"));
        let b: BigUint = b.trim().parse().map_err(|_| Error::Parse(format!("bad factor `{f}`")))?;
        let e: u32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?;
        acc *= b.pow(e);
    }
    Ok(acc)
}
