//! Seeded property suites shared by the CLI `verify` command and the
//! acceptance target. Every check is exact.

use serde::Serialize;

use crate::autact::{apply_gen, sigma7_image, verify_presentation, ALPHABET2, ALPHABET3};
use crate::error::Result;
use crate::exactnum::CycNum;
use crate::matgroups::half_traces;
use crate::quadforms::{gram2, gram3, mat_mul, reflection_group_order, reflections_from, standard_rank4, transpose};
use crate::sample;
use crate::tracepoints::{eval_e, eval_f, eval_g, fano_graph, in_vx};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub samples: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(suite: &str, name: &str, samples: usize, passed: bool) -> Self {
        Check { suite: suite.into(), name: name.into(), samples, passed, detail: None }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

pub const SUITES: [&str; 5] = ["identities", "presentation", "invariance", "fano", "coxeter"];

pub fn run_suite(suite: &str, samples: usize, seed: u64) -> Result<Vec<Check>> {
    match suite {
        "identities" => identities(samples, seed),
        "presentation" => Ok(presentation(samples, seed)),
        "invariance" => invariance(samples, seed),
        "fano" => Ok(fano()),
        "coxeter" => coxeter(),
        s => Err(crate::Error::Parse(format!("unknown suite `{s}`"))),
    }
}

/// Determinant, reflection, trace and commutator identities.
pub fn identities(samples: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample::rng(seed);
    let one = CycNum::one();

    let mut det2 = true;
    let mut det3 = true;
    let mut refl = true;
    for _ in 0..samples {
        let p = sample::random_tuple(&mut rng, 2);
        let g = gram2(&p)?;
        det2 &= g.det() == &one - &eval_e(&p)?;
        refl &= reflections_preserve(&g.g);

        let q = sample::random_tuple(&mut rng, 3);
        let g3 = gram3(&q)?;
        let gg = eval_g(&q)?;
        det3 &= g3.det() + eval_f(&q)? == &gg * &gg;
        refl &= reflections_preserve(&g3.g);
    }

    let mut trace = true;
    let mut comm = true;
    for _ in 0..samples {
        let a = sample::random_sl2(&mut rng);
        let b = sample::random_sl2(&mut rng);
        trace &= a.mul(&b).trace() == &(a.trace() * b.trace()) - &a.mul(&b.inverse()).trace();
        let h = half_traces(&[a.clone(), b.clone()])?;
        let e = crate::tracepoints::e_poly(&h[0], &h[1], &h[2]);
        let c = a.mul(&b).mul(&a.inverse()).mul(&b.inverse());
        comm &= c.half_trace() == e.mul_int(2) - &one;
    }

    Ok(vec![
        Check::new("identities", "det(g2) = 1 - E", samples, det2),
        Check::new("identities", "det(g3) + F = G^2", samples, det3),
        Check::new("identities", "R^T (2g) R = 2g", 2 * samples, refl),
        Check::new("identities", "tr(AB) = tr(A) tr(B) - tr(AB^-1)", samples, trace),
        Check::new("identities", "tr([A1,A2])/2 = 2E - 1", samples, comm),
    ])
}

fn reflections_preserve(g: &[Vec<CycNum>]) -> bool {
    let gf = match crate::quadforms::GramForm::new(g.to_vec()) {
        Ok(f) => f,
        Err(_) => return false,
    };
    // order_cap 1: only the matrices are needed here
    let rs = match reflections_from(&gf, 1) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let two_g: Vec<Vec<CycNum>> = g.iter().map(|row| row.iter().map(|c| c.mul_int(2)).collect()).collect();
    rs.r.iter().all(|r| mat_mul(&mat_mul(&transpose(r), &two_g), r) == two_g)
}

/// Letter invariance of `E`, `F` and of the relation ideal.
pub fn invariance(samples: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample::rng(seed);
    let mut e_ok = true;
    let mut f_ok = true;
    for _ in 0..samples {
        let p = sample::random_tuple(&mut rng, 2);
        let e = eval_e(&p)?;
        for &l in &ALPHABET2 {
            e_ok &= eval_e(&apply_gen(&p, l)?)? == e;
        }
        let q = sample::random_tuple(&mut rng, 3);
        let f = eval_f(&q)?;
        for &l in &ALPHABET3 {
            f_ok &= eval_f(&apply_gen(&q, l)?)? == f;
        }
    }
    let mut vx_ok = true;
    for _ in 0..samples.min(100) {
        let th = sample::random_angles(&mut rng, 3);
        let p = crate::tracepoints::eval_pi(&th)?;
        for &l in &ALPHABET3 {
            vx_ok &= in_vx(&apply_gen(&p, l)?)?;
        }
    }
    Ok(vec![
        Check::new("invariance", "E under sigma letters", samples, e_ok),
        Check::new("invariance", "F under U, Q, S, P", samples, f_ok),
        Check::new("invariance", "V(X) under U, Q, S, P", samples.min(100), vx_ok),
    ])
}

pub fn presentation(samples: usize, seed: u64) -> Vec<Check> {
    verify_presentation(samples, seed)
        .into_iter()
        .map(|r| Check::new("presentation", &r.relation, r.samples, r.passed))
        .collect()
}

pub const SIGMA7_EXPECTED: [(&str, &str); 4] =
    [("U", "(1,5)(2,6)"), ("Q", "(2,3,5)(4,7,6)"), ("S", "()"), ("P", "(3,5)(4,6)")];

pub fn fano() -> Vec<Check> {
    let img = sigma7_image();
    let got: Vec<(String, String)> = img.images.clone();
    let want: Vec<(String, String)> = SIGMA7_EXPECTED.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let f = fano_graph();
    let e61 = f.edge(6, 1).map(|e| e.label);
    let mut checks = vec![
        Check::new("fano", "sigma7 generator images", 1, got == want)
            .with_detail(got.iter().map(|(l, p)| format!("{l}->{p}")).collect::<Vec<_>>().join(" ")),
        Check::new("fano", "sigma7 image order 168", 1, img.order == 168u32.into())
            .with_detail(img.order.to_string()),
        Check::new("fano", "7 points, 7 lines", 1, f.free_labels.len() == 7 && f.lines.len() == 7),
        Check::new("fano", "edge (U6,U1) labelled 12", 1, e61 == Some("12")),
    ];
    let incidence = (1..=7).all(|a| {
        (a + 1..=7).all(|b| f.lines.iter().filter(|l| l.points.contains(&a) && l.points.contains(&b)).count() == 1)
    });
    checks.push(Check::new("fano", "two points span one line", 1, incidence));
    checks
}

pub const COXETER_EXPECTED: [(&str, usize); 5] =
    [("A4", 120), ("B4", 384), ("D4", 192), ("F4", 1152), ("H4", 14400)];

pub fn coxeter() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (label, order) in COXETER_EXPECTED {
        let rs = reflections_from(&standard_rank4(label)?, 60)?;
        let got = reflection_group_order(&rs, 20_000)?;
        out.push(Check::new("coxeter", &format!("{label} order {order}"), 1, got == order).with_detail(got.to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        for s in ["identities", "invariance", "presentation", "fano"] {
            for c in run_suite(s, 20, 7).unwrap() {
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1, 0).is_err());
    }
}
