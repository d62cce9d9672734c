//! Generator actions of Aut(F2) and Aut(F3) on trace tuples, words, and the
//! homomorphisms to GL(2, Z) and S7.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::orbits::perm::{closure_order, Perm};
use crate::sample;
use crate::tracepoints::TraceTuple;

/// Generators: `Sigma1`, `Sigma2`, `S2`, `P2` act on triples, `U`, `Q`, `S`, `P`
/// on septuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    Sigma1,
    Sigma2,
    S2,
    P2,
    U,
    Q,
    S,
    P,
}

impl Gen {
    pub fn rank(self) -> usize {
        match self {
            Gen::Sigma1 | Gen::Sigma2 | Gen::S2 | Gen::P2 => 2,
            _ => 3,
        }
    }

    pub fn is_involution(self) -> bool {
        matches!(self, Gen::S2 | Gen::P2 | Gen::S | Gen::P)
    }

    fn token(self) -> &'static str {
        match self {
            Gen::Sigma1 => "s1",
            Gen::Sigma2 => "s2",
            Gen::S2 => "S2",
            Gen::P2 => "P2",
            Gen::U => "U",
            Gen::Q => "Q",
            Gen::S => "S",
            Gen::P => "P",
        }
    }
}

/// A generator or its inverse. Involutions never carry the inverse flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: Gen, inv: bool) -> Self {
        Letter { gen, inv: inv && !gen.is_involution() }
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.gen, !self.inv)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen.token(), if self.inv { "'" } else { "" })
    }
}

pub const SIGMA1: Letter = Letter { gen: Gen::Sigma1, inv: false };
pub const SIGMA1_INV: Letter = Letter { gen: Gen::Sigma1, inv: true };
pub const SIGMA2: Letter = Letter { gen: Gen::Sigma2, inv: false };
pub const SIGMA2_INV: Letter = Letter { gen: Gen::Sigma2, inv: true };
pub const S2: Letter = Letter { gen: Gen::S2, inv: false };
pub const P2: Letter = Letter { gen: Gen::P2, inv: false };
pub const U: Letter = Letter { gen: Gen::U, inv: false };
pub const U_INV: Letter = Letter { gen: Gen::U, inv: true };
pub const Q: Letter = Letter { gen: Gen::Q, inv: false };
pub const Q_INV: Letter = Letter { gen: Gen::Q, inv: true };
pub const S: Letter = Letter { gen: Gen::S, inv: false };
pub const P: Letter = Letter { gen: Gen::P, inv: false };

/// Every letter of the rank-2 alphabet (generators and inverses).
pub const ALPHABET2: [Letter; 6] = [SIGMA1, SIGMA1_INV, SIGMA2, SIGMA2_INV, S2, P2];
/// Every letter of the rank-3 alphabet.
pub const ALPHABET3: [Letter; 6] = [U, U_INV, Q, Q_INV, S, P];

pub fn alphabet(rank: usize) -> &'static [Letter] {
    if rank == 2 {
        &ALPHABET2
    } else {
        &ALPHABET3
    }
}

/// A freely reduced word, read and applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl AutWord {
    pub fn empty(rank: usize) -> Self {
        AutWord { rank, letters: Vec::new() }
    }

    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut w = Self::empty(rank);
        for l in letters {
            w.push(l)?;
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Append a letter, cancelling it against a trailing inverse.
    pub fn push(&mut self, l: Letter) -> Result<()> {
        if l.gen.rank() != self.rank {
            return Err(Error::UnsupportedLetter { letter: l.to_string() });
        }
        match self.letters.last() {
            Some(&last) if !l.gen.is_involution() && last == l.inverse() => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
        Ok(())
    }

    pub fn concat(&self, o: &AutWord) -> Result<AutWord> {
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l)?;
        }
        Ok(w)
    }

    pub fn inverse(&self) -> AutWord {
        AutWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Integer power; negative exponents use the inverse word.
    pub fn pow(&self, e: i32) -> AutWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = AutWord::empty(self.rank);
        for _ in 0..e.unsigned_abs() {
            w = w.concat(&base).expect("same rank");
        }
        w
    }

    /// Commutator `a^-1 b^-1 a b`.
    pub fn commutator(a: &AutWord, b: &AutWord) -> AutWord {
        a.inverse().concat(&b.inverse()).and_then(|w| w.concat(a)).and_then(|w| w.concat(b)).expect("same rank")
    }

    /// Parse words such as `U Q' S P`, `(Q' U Q)^2`, `U^-1` or `s1 s2' P2`.
    pub fn parse(rank: usize, s: &str) -> Result<AutWord> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let w = parse_seq(rank, &tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        Ok(w)
    }
}

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

impl Serialize for AutWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AutWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let rank = if s.contains('s') || s.contains("S2") || s.contains("P2") { 2 } else { 3 };
        let s = if s == "1" { String::new() } else { s };
        AutWord::parse(rank, &s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Letter(String),
    Open,
    Close,
    Pow(i32),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let bad = |msg: &str| Error::Parse(format!("{msg} in word `{s}`"));
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' {
            i += 1;
        } else if c == '(' {
            out.push(Tok::Open);
            i += 1;
        } else if c == ')' {
            out.push(Tok::Close);
            i += 1;
        } else if c == '\'' {
            out.push(Tok::Pow(-1));
            i += 1;
        } else if c == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let e: String = chars[start..i].iter().collect();
            out.push(Tok::Pow(i32::from_str(&e).map_err(|_| bad("bad exponent"))?));
        } else if c.is_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '\u{2081}' || chars[i] == '\u{2082}') {
                i += 1;
            }
            out.push(Tok::Letter(chars[start..i].iter().collect()));
        } else {
            return Err(bad(&format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn letter_from_token(rank: usize, t: &str) -> Result<Letter> {
    let g = match (rank, t) {
        (2, "s1" | "σ1" | "σ₁") => Gen::Sigma1,
        (2, "s2" | "σ2" | "σ₂") => Gen::Sigma2,
        (2, "S2" | "S₂") => Gen::S2,
        (2, "P2" | "P₂") => Gen::P2,
        (3, "U") => Gen::U,
        (3, "Q") => Gen::Q,
        (3, "S") => Gen::S,
        (3, "P") => Gen::P,
        _ => return Err(Error::UnsupportedLetter { letter: t.to_string() }),
    };
    Ok(Letter::new(g, false))
}

fn parse_seq(rank: usize, toks: &[Tok], pos: &mut usize) -> Result<AutWord> {
    let mut w = AutWord::empty(rank);
    while *pos < toks.len() {
        let atom = match &toks[*pos] {
            Tok::Letter(t) => {
                *pos += 1;
                AutWord::new(rank, [letter_from_token(rank, t)?])?
            }
            Tok::Open => {
                *pos += 1;
                let inner = parse_seq(rank, toks, pos)?;
                if toks.get(*pos) != Some(&Tok::Close) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                *pos += 1;
                inner
            }
            Tok::Close => break,
            Tok::Pow(_) => return Err(Error::Parse("exponent without a base".into())),
        };
        let mut atom = atom;
        while let Some(Tok::Pow(e)) = toks.get(*pos) {
            atom = atom.pow(*e);
            *pos += 1;
        }
        w = w.concat(&atom)?;
    }
    Ok(w)
}

fn two(a: &CycNum, b: &CycNum) -> CycNum {
    (a * b).mul_int(2)
}

/// Image of raw coordinates under one letter (rank taken from the letter).
pub(crate) fn act(x: &[CycNum], l: Letter) -> Vec<CycNum> {
    use Gen::*;
    match (l.gen, l.inv) {
        (Sigma1, false) => vec![x[2].clone(), x[1].clone(), two(&x[1], &x[2]) - &x[0]],
        (Sigma1, true) => vec![two(&x[0], &x[1]) - &x[2], x[1].clone(), x[0].clone()],
        (Sigma2, false) => vec![x[0].clone(), two(&x[0], &x[1]) - &x[2], x[1].clone()],
        (Sigma2, true) => vec![x[0].clone(), x[2].clone(), two(&x[0], &x[2]) - &x[1]],
        (S2, _) => vec![x[0].clone(), x[1].clone(), two(&x[0], &x[1]) - &x[2]],
        (P2, _) => vec![x[1].clone(), x[0].clone(), x[2].clone()],
        (U, false) => vec![
            x[3].clone(),
            x[1].clone(),
            x[2].clone(),
            two(&x[1], &x[3]) - &x[0],
            x[6].clone(),
            x[5].clone(),
            two(&x[1], &x[6]) - &x[4],
        ],
        (U, true) => vec![
            two(&x[1], &x[0]) - &x[3],
            x[1].clone(),
            x[2].clone(),
            x[0].clone(),
            two(&x[1], &x[4]) - &x[6],
            x[5].clone(),
            x[4].clone(),
        ],
        (Q, false) => vec![
            x[1].clone(),
            x[2].clone(),
            x[0].clone(),
            x[5].clone(),
            x[3].clone(),
            x[4].clone(),
            x[6].clone(),
        ],
        (Q, true) => vec![
            x[2].clone(),
            x[0].clone(),
            x[1].clone(),
            x[4].clone(),
            x[5].clone(),
            x[3].clone(),
            x[6].clone(),
        ],
        (S, _) => vec![
            x[0].clone(),
            x[1].clone(),
            x[2].clone(),
            two(&x[0], &x[1]) - &x[3],
            two(&x[0], &x[2]) - &x[4],
            x[5].clone(),
            two(&x[0], &x[5]) - &x[6],
        ],
        (P, _) => {
            let cubic = (&x[0] * &x[1] * &x[2]).mul_int(-4)
                + two(&x[0], &x[5])
                + two(&x[1], &x[4])
                + two(&x[2], &x[3])
                - &x[6];
            vec![x[1].clone(), x[0].clone(), x[2].clone(), x[3].clone(), x[5].clone(), x[4].clone(), cubic]
        }
    }
}

pub fn apply_gen(p: &TraceTuple, l: Letter) -> Result<TraceTuple> {
    if l.gen.rank() != p.arity() {
        return Err(Error::ArityMismatch { expected: if l.gen.rank() == 2 { 3 } else { 7 }, found: p.coords().len() });
    }
    Ok(TraceTuple::from_vec(act(p.coords(), l)))
}

/// Apply the letters of `w` in reading order.
pub fn apply_word(p: &TraceTuple, w: &AutWord) -> Result<TraceTuple> {
    if w.rank() != p.arity() {
        return Err(Error::ArityMismatch { expected: if w.rank() == 2 { 3 } else { 7 }, found: p.coords().len() });
    }
    let mut x = p.coords().to_vec();
    for &l in w.letters() {
        x = act(&x, l);
    }
    Ok(TraceTuple::from_vec(x))
}

pub type Mat2i = [[i64; 2]; 2];

fn mul2(a: &Mat2i, b: &Mat2i) -> Result<Mat2i> {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = 0i64;
            for k in 0..2 {
                s = a[i][k]
                    .checked_mul(b[k][j])
                    .and_then(|t| s.checked_add(t))
                    .ok_or_else(|| Error::OutOfRange("integer matrix entry overflow".into()))?;
            }
            c[i][j] = s;
        }
    }
    Ok(c)
}

/// The integer matrix `M` of a sigma-word, normalised so that applying the
/// word to `Pi2(theta)` gives `Pi2(M theta)`.
pub fn phi2(w: &AutWord) -> Result<Mat2i> {
    let mut m: Mat2i = [[1, 0], [0, 1]];
    for &l in w.letters() {
        let g: Mat2i = match (l.gen, l.inv) {
            (Gen::Sigma1, false) => [[1, 1], [0, 1]],
            (Gen::Sigma1, true) => [[1, -1], [0, 1]],
            (Gen::Sigma2, false) => [[1, 0], [-1, 1]],
            (Gen::Sigma2, true) => [[1, 0], [1, 1]],
            _ => return Err(Error::UnsupportedLetter { letter: l.to_string() }),
        };
        m = mul2(&g, &m)?;
    }
    Ok(m)
}

/// Image of a rank-3 letter in S7, acting on the seven zero-position sets.
pub fn sigma7_letter(l: Letter) -> Result<Perm> {
    let p = match l.gen {
        Gen::U => Perm::from_cycles(7, &[&[1, 5], &[2, 6]]),
        Gen::Q => Perm::from_cycles(7, &[&[2, 3, 5], &[4, 7, 6]]),
        Gen::S => Perm::identity(7),
        Gen::P => Perm::from_cycles(7, &[&[3, 5], &[4, 6]]),
        _ => return Err(Error::UnsupportedLetter { letter: l.to_string() }),
    };
    Ok(if l.inv { p.inverse() } else { p })
}

/// Permutation of a word, composed left to right.
pub fn sigma7(w: &AutWord) -> Result<Perm> {
    let mut acc = Perm::identity(7);
    for &l in w.letters() {
        acc = acc.then(&sigma7_letter(l)?);
    }
    Ok(acc)
}

/// The seven zero-position sets permuted by `sigma7`, in their standard order.
pub const ZERO_SETS: [[usize; 4]; 7] =
    [[1, 2, 3, 7], [1, 2, 5, 6], [1, 3, 4, 6], [1, 4, 5, 7], [2, 3, 4, 5], [2, 4, 6, 7], [3, 5, 6, 7]];

const PATTERN_TO_ZERO_SET: [usize; 7] = [7, 6, 4, 5, 3, 2, 1];

/// Index (1-based) in `ZERO_SETS` of the zero set of pattern `U_i`.
pub fn zero_set_of_pattern(i: usize) -> usize {
    PATTERN_TO_ZERO_SET[i - 1]
}

/// Pattern index `i` whose zero set sits at position `k` of `ZERO_SETS`.
pub fn pattern_of_zero_set(k: usize) -> usize {
    PATTERN_TO_ZERO_SET.iter().position(|&z| z == k).expect("k in 1..=7") + 1
}

/// Permutation of the patterns `U_1..U_7` induced by a word.
pub fn pattern_permutation(w: &AutWord) -> Result<Perm> {
    let s = sigma7(w)?;
    Ok(Perm::from_images(
        (1..=7).map(|i| (pattern_of_zero_set(s.apply(zero_set_of_pattern(i) - 1) + 1) - 1) as u32).collect(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct PermImage {
    pub images: Vec<(String, String)>,
    pub order: BigUint,
}

/// Generator images of the rank-3 homomorphism to S7 and the order of its image.
pub fn sigma7_image() -> PermImage {
    let gens: Vec<Perm> = [U, Q, S, P].iter().map(|&l| sigma7_letter(l).expect("rank-3 letter")).collect();
    let order = closure_order(&gens, 10_000).expect("subgroup of S7");
    PermImage {
        images: [U, Q, S, P].iter().zip(&gens).map(|(l, g)| (l.to_string(), g.to_string())).collect(),
        order: BigUint::from(order),
    }
}

/// The eighteen generators of the kernel of `sigma7`, in their listed order.
pub const K7_WORDS: [&str; 18] = [
    "S",
    "U S U'",
    "U^2",
    "P U S U' P",
    "P U^2 P",
    "Q U S U' Q'",
    "(Q' U Q)^2",
    "P Q U S U' Q' P",
    "P Q U^2 Q' P",
    "P Q' U^2 Q P",
    "(Q' U Q' U Q U' Q)^2",
    "(U Q' U Q U Q' U' Q U')^2",
    "(U Q' U Q' U Q U' Q U')^2",
    "Q' U P Q U Q U' Q' U' Q U' P",
    "P Q U Q' U P U Q U' Q' P U'",
    "P U P Q U P U P U' Q U' P",
    "P Q' U Q' U P U Q U' Q' P U' Q",
    "(Q U Q' U Q' U Q U' Q U' Q')^2",
];

pub fn k7_generators() -> Vec<AutWord> {
    K7_WORDS.iter().map(|s| AutWord::parse(3, s).expect("valid word")).collect()
}

/// A defining relation `lhs = rhs` of the rank-3 presentation.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: AutWord,
    pub rhs: AutWord,
}

fn w3(s: &str) -> AutWord {
    AutWord::parse(3, s).expect("valid word")
}

pub fn presentation_relations() -> Vec<Relation> {
    let e = AutWord::empty(3);
    let rel = |name, lhs: AutWord, rhs: AutWord| Relation { name, lhs, rhs };
    let comm = |a: &str, b: &str| AutWord::commutator(&w3(a), &w3(b));
    vec![
        rel("P^2", w3("P P"), e.clone()),
        rel("Q^3", w3("Q Q Q"), e.clone()),
        rel("S^2", w3("S S"), e.clone()),
        rel("(QP)^2", w3("(Q P)^2"), e.clone()),
        rel("SQP=QPS", w3("S Q P"), w3("Q P S")),
        rel("SQ'PQ=Q'PQS", w3("S Q' P Q"), w3("Q' P Q S")),
        rel("SQ'SQ=Q'SQS", w3("S Q' S Q"), w3("Q' S Q S")),
        rel("(U,QPQ'PQ)", comm("U", "Q P Q' P Q"), e.clone()),
        rel("(U,Q^-2SQ^2)", comm("U", "Q^-2 S Q^2"), e.clone()),
        rel("(PSPU)^2", w3("(P S P U)^2"), e.clone()),
        rel("PUPSUSPS=U", w3("P U P S U S P S"), w3("U")),
        rel("(PQ'UQ)^2UQ'=UQ'U", w3("(P Q' U Q)^2 U Q'"), w3("U Q' U")),
        rel("USUS=SUSU", w3("U S U S"), w3("S U S U")),
        rel("(U,PQ'SUSQP)", comm("U", "P Q' S U S Q P"), e.clone()),
        rel("(U,PQ'PQPUPQ'PQP)", comm("U", "P Q' P Q P U P Q' P Q P"), e),
    ]
}

fn apply_composite(p: &TraceTuple, w: &AutWord) -> TraceTuple {
    let mut x = p.coords().to_vec();
    for &l in w.letters().iter().rev() {
        x = act(&x, l);
    }
    TraceTuple::from_vec(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub samples: usize,
    pub passed: bool,
}

/// Checks every relation on `samples` random rational septuples, exactly.
///
/// Relation words are composites of automorphisms, so the induced maps on
/// tuples are applied last letter first.
pub fn verify_presentation(samples: usize, seed: u64) -> Vec<RelationCheck> {
    let mut rng = sample::rng(seed);
    let points: Vec<TraceTuple> = (0..samples).map(|_| sample::random_tuple(&mut rng, 3)).collect();
    presentation_relations()
        .into_iter()
        .map(|r| {
            let passed = points.iter().all(|p| {
                apply_composite(p, &r.lhs) == apply_composite(p, &r.rhs)
            });
            RelationCheck { relation: r.name.to_string(), samples, passed }
        })
        .collect()
}
