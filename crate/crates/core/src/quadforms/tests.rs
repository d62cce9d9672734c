use super::*;
use crate::autact::{apply_word, SIGMA2_INV};
use crate::exactnum::{rat, Rat};
use crate::matgroups::{catalog_group, closure, trace_tuple, Closure, GroupKind};
use crate::sample;
use crate::tracepoints::{eval_f, eval_g};
use rand::Rng;

fn halves() -> TraceTuple {
    TraceTuple::from_rats(&vec![rat(1, 2); 7]).unwrap()
}

#[test]
fn gram3_examples() {
    let z = TraceTuple::zeros(3);
    let g = gram3(&z).unwrap();
    assert_eq!(g.g, identity(4));
    assert!(g.det().is_one());
    assert_eq!(eval_f(&z).unwrap(), CycNum::from_int(-1));
    assert!(eval_g(&z).unwrap().is_zero());

    let p = halves();
    let g = gram3(&p).unwrap();
    let lhs = g.det() + eval_f(&p).unwrap();
    assert_eq!(lhs, eval_g(&p).unwrap().square());
}

#[test]
fn det_identities_at_random_points() {
    let mut rng = sample::rng(71);
    for _ in 0..500 {
        let p = sample::random_tuple(&mut rng, 3);
        let g = gram3(&p).unwrap();
        assert_eq!(g.det() + eval_f(&p).unwrap(), eval_g(&p).unwrap().square());
        let q = sample::random_tuple(&mut rng, 2);
        let x = q.coords();
        assert_eq!(gram2(&q).unwrap().det(), CycNum::one() - e_poly(&x[0], &x[1], &x[2]));
    }
}

#[test]
fn minors_match_e() {
    let mut rng = sample::rng(72);
    for _ in 0..50 {
        let p = sample::random_tuple(&mut rng, 3);
        let x = p.coords();
        let m = gram3(&p).unwrap().leading_minors();
        assert_eq!(m[1], CycNum::one() - x[0].square());
        assert_eq!(m[2], CycNum::one() - e_poly(&x[0], &x[1], &x[3]));
        assert_eq!(m[3], gram3(&p).unwrap().det());
    }
}

#[test]
fn reflections_preserve_form() {
    let z = reflections_from(&gram3(&TraceTuple::zeros(3)).unwrap(), 60).unwrap();
    for (i, r) in z.r.iter().enumerate() {
        let mut d = identity(4);
        d[i][i] = CycNum::from_int(-1);
        assert_eq!(*r, d);
    }
    let mut rng = sample::rng(73);
    for _ in 0..500 {
        let p = sample::random_tuple(&mut rng, 3);
        let g = gram3(&p).unwrap();
        let rs = reflections_from(&g, 1).unwrap();
        let two: SqMat = g.g.iter().map(|r| r.iter().map(|c| c.mul_int(2)).collect()).collect();
        for r in &rs.r {
            assert_eq!(mat_mul(&mat_mul(&transpose(r), &two), r), two);
            assert_eq!(mat_mul(r, r), identity(4));
        }
    }
}

#[test]
fn n2_reflections_match_direct_display() {
    // The rank-2 display uses 2[[1,x1,x12],[x1,1,x2],[x12,x2,1]], which is
    // the g_2 form at the image of p under sigma_2^-1.
    let mut rng = sample::rng(74);
    for _ in 0..50 {
        let p = sample::random_tuple(&mut rng, 2);
        let x = p.coords().to_vec();
        let q = apply_word(&p, &AutWord::new(2, vec![SIGMA2_INV]).unwrap()).unwrap();
        let rs = reflections_from(&gram2(&q).unwrap(), 1).unwrap();
        let (x1, x2, x12) = (&x[0], &x[1], &x[2]);
        let one = CycNum::one;
        let m1 = CycNum::from_int(-1);
        let t = |c: &CycNum| c.mul_int(-2);
        let expect = [
            vec![vec![m1.clone(), t(x1), t(x12)], vec![CycNum::zero(), one(), CycNum::zero()], vec![CycNum::zero(), CycNum::zero(), one()]],
            vec![vec![one(), CycNum::zero(), CycNum::zero()], vec![t(x1), m1.clone(), t(x2)], vec![CycNum::zero(), CycNum::zero(), one()]],
            vec![vec![one(), CycNum::zero(), CycNum::zero()], vec![CycNum::zero(), one(), CycNum::zero()], vec![t(x12), t(x2), m1.clone()]],
        ];
        for i in 0..3 {
            assert_eq!(rs.r[i], expect[i]);
        }
    }
}

#[test]
fn product_order_tracks_coupling() {
    let g = GramForm::coxeter(2, &[(0, 1, 5)]).unwrap();
    let rs = reflections_from(&g, 60).unwrap();
    assert_eq!(rs.product_orders[0][1], Some(5));
    match coxeter_classify(&rs) {
        CoxeterClass::Irreducible { label, order, .. } => {
            assert_eq!(label, "I2(5)");
            assert_eq!(order, 10);
        }
        c => panic!("{c:?}"),
    }
    // x1 = 1/2 couples vertices 0 and 1 with product order 3
    let p = TraceTuple::from_rats(&[rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap();
    let rs = reflections_from(&gram3(&p).unwrap(), 60).unwrap();
    assert_eq!(rs.product_orders[0][1], Some(3));
}

#[test]
fn irrational_coupling_is_infinite() {
    let g = GramForm::new(vec![
        vec![CycNum::one(), CycNum::from_ratio(1, 3)],
        vec![CycNum::from_ratio(1, 3), CycNum::one()],
    ])
    .unwrap();
    let rs = reflections_from(&g, 60).unwrap();
    assert_eq!(rs.product_orders[0][1], None);
    assert!(matches!(coxeter_classify(&rs), CoxeterClass::Infinite { .. }));
}

#[test]
fn identity_gram_is_four_a1() {
    let rs = reflections_from(&gram3(&TraceTuple::zeros(3)).unwrap(), 60).unwrap();
    match coxeter_classify(&rs) {
        CoxeterClass::Product { components, order } => {
            assert_eq!(components.len(), 4);
            assert!(components.iter().all(|c| c.label == "A1"));
            assert_eq!(order, 16);
        }
        c => panic!("{c:?}"),
    }
}

#[test]
fn standard_rank4_types() {
    for (label, order) in [("A4", 120u64), ("B4", 384), ("D4", 192), ("F4", 1152)] {
        let g = standard_rank4(label).unwrap();
        let rs = reflections_from(&g, 60).unwrap();
        match coxeter_classify(&rs) {
            CoxeterClass::Irreducible { label: l, rank, order: o } => {
                assert_eq!((l.as_str(), rank, o), (label, 4, order));
            }
            c => panic!("{c:?}"),
        }
        assert_eq!(reflection_group_order(&rs, 20_000).unwrap() as u64, order);
        assert!(is_positive_definite(&g).unwrap().is_positive());
    }
    let rs = reflections_from(&standard_rank4("H4").unwrap(), 60).unwrap();
    assert!(matches!(coxeter_classify(&rs), CoxeterClass::Irreducible { order: 14400, .. }));
}

#[test]
fn definiteness_examples() {
    assert!(is_positive_definite(&gram3(&TraceTuple::zeros(3)).unwrap()).unwrap().is_positive());
    let p = TraceTuple::from_rats(&[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap();
    match is_positive_definite(&gram3(&p).unwrap()).unwrap() {
        Definiteness::NotPositive { minor, value } => {
            assert_eq!(minor, 2);
            assert!(value.is_zero());
        }
        d => panic!("{d:?}"),
    }
    assert_eq!(cholesky(&gram3(&p).unwrap(), 128).unwrap_err(), Error::NotPositiveDefinite { minor: 2 });
}

#[test]
fn catalog_points_off_g_are_positive_definite() {
    let gens = catalog_group(GroupKind::BI120).unwrap();
    let Closure::Finite(elts) = closure(&gens, 200).unwrap() else { panic!() };
    let mut rng = sample::rng(75);
    let mut checked = 0;
    while checked < 40 {
        let t: Vec<Mat2> = (0..3).map(|_| elts[rng.gen_range(0..elts.len())].clone()).collect();
        let p = trace_tuple(&t).unwrap();
        if eval_g(&p).unwrap().is_zero() || !p.coords().iter().all(|c| c.abs_le_one().unwrap() && !c.abs_real().unwrap().is_one()) {
            continue;
        }
        assert!(eval_f(&p).unwrap().is_zero());
        assert!(is_positive_definite(&gram3(&p).unwrap()).unwrap().is_positive(), "{p}");
        checked += 1;
    }
}

#[test]
fn gram_of_matrices_matches_gram3() {
    let gens = catalog_group(GroupKind::BO48).unwrap();
    let Closure::Finite(elts) = closure(&gens, 100).unwrap() else { panic!() };
    let t = vec![elts[3].clone(), elts[17].clone(), elts[29].clone()];
    let p = trace_tuple(&t).unwrap();
    assert_eq!(gram_of_matrices(&t).unwrap(), gram3(&p).unwrap());
}

fn small_pd_tuple(rng: &mut sample::SampleRng) -> TraceTuple {
    let v: Vec<Rat> = (0..7).map(|_| rat(rng.gen_range(-4..=4), 10)).collect();
    TraceTuple::from_rats(&v).unwrap()
}

#[test]
fn cholesky_reconstructs_and_matches_closed_form() {
    let id = cholesky(&gram3(&TraceTuple::zeros(3)).unwrap(), 128).unwrap().to_f64();
    for (i, row) in id.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, if i == j { 1.0 } else { 0.0 });
        }
    }
    let mut rng = sample::rng(76);
    let mut done = 0;
    while done < 100 {
        let p = small_pd_tuple(&mut rng);
        let g = gram3(&p).unwrap();
        if !is_positive_definite(&g).unwrap().is_positive() {
            continue;
        }
        let ch = cholesky(&g, 128).unwrap();
        assert!(ch.residual(&g, 128) < 1e-10);
        let closed = cholesky_closed_form(&p, 128).unwrap();
        let l = ch.to_f64();
        for i in 0..4 {
            for j in 0..=i {
                let sign = if j >= 2 { -1.0 } else { 1.0 };
                assert!((closed[i][j].mid_f64() - sign * l[i][j]).abs() < 1e-10, "{p} entry ({i},{j})");
            }
        }
        done += 1;
    }
}

#[test]
fn escape_examples() {
    let t = TraceTuple::from_rats(&[rat(9, 10), rat(9, 10), rat(-9, 10)]).unwrap();
    let w = escape_large_coordinate(&t, 64).unwrap();
    assert!(apply_word(&t, &w).unwrap().has_large_coordinate().unwrap());

    let h = TraceTuple::from_rats(&[rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
    assert!(matches!(escape_large_coordinate(&h, 64), Err(Error::Precondition(_))));
    let two_zeros = TraceTuple::from_rats(&[rat(0, 1), rat(0, 1), rat(1, 2)]).unwrap();
    assert!(matches!(escape_large_coordinate(&two_zeros, 64), Err(Error::Precondition(_))));
}

#[test]
fn escape_on_random_admissible_triples() {
    let mut rng = sample::rng(77);
    let mut done = 0;
    while done < 50 {
        let v: Vec<Rat> = (0..3).map(|_| sample::random_unit_rat(&mut rng)).collect();
        let t = TraceTuple::from_rats(&v).unwrap();
        let x = t.coords();
        if t.nonzero_count() < 2 || e_poly(&x[0], &x[1], &x[2]).cmp_real(&CycNum::one()).unwrap() != Ordering::Greater || t.has_large_coordinate().unwrap() {
            continue;
        }
        let w = escape_large_coordinate(&t, 64).unwrap();
        assert!(w.letters().len() <= 64);
        assert!(apply_word(&t, &w).unwrap().has_large_coordinate().unwrap());
        done += 1;
    }
}

#[test]
fn h4_closure_order() {
    let rs = reflections_from(&standard_rank4("H4").unwrap(), 60).unwrap();
    assert_eq!(reflection_group_order(&rs, 20_000).unwrap(), 14400);
}

#[test]
fn unknown_standard_type() {
    assert!(standard_rank4("E8").is_err());
}
