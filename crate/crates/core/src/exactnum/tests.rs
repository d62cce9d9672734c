use super::*;
use proptest::prelude::*;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

fn sqrt5() -> CycNum {
    CycNum::zeta(5, 1) - CycNum::zeta(5, 2) - CycNum::zeta(5, 3) + CycNum::zeta(5, 4)
}

fn h(x: &CycNum) -> u64 {
    let mut s = DefaultHasher::new();
    x.hash(&mut s);
    s.finish()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn sum_of_fifth_roots() {
    let a = (CycNum::zeta(5, 1) + CycNum::zeta(5, 4)).mul_rat(&rat(1, 2));
    let b = (CycNum::zeta(5, 2) + CycNum::zeta(5, 3)).mul_rat(&rat(1, 2));
    assert_eq!(a + b, CycNum::from_ratio(-1, 2));
}

#[test]
fn golden_product() {
    let s = sqrt5();
    assert_eq!(s.square(), CycNum::from_int(5));
    let a = (CycNum::one() + s.clone()).mul_rat(&rat(1, 4));
    let b = (CycNum::from_int(-1) + s).mul_rat(&rat(1, 4));
    assert_eq!(&a * &b, CycNum::from_ratio(1, 4));
}

#[test]
fn additive_identity() {
    let x = real_cos(&rat(2, 7));
    assert_eq!(&x + &CycNum::zero(), x);
}

#[test]
fn real_cos_examples() {
    assert_eq!(real_cos(&rat(0, 1)), CycNum::one());
    let c5 = real_cos(&rat(1, 5));
    assert_eq!(c5.conductor(), 5);
    assert!(close(c5.to_f64(), (std::f64::consts::TAU / 5.0).cos()));
    assert_eq!(c5, (sqrt5() - CycNum::one()).mul_rat(&rat(1, 4)));
    let c8 = real_cos(&rat(1, 8));
    assert_eq!(c8.conductor(), 8);
    assert!(close(c8.to_f64(), std::f64::consts::FRAC_1_SQRT_2));
    assert!(c8.is_real());
    assert_eq!(real_cos(&rat(3, 7)), real_cos(&rat(-3, 7)));
    assert_eq!(real_cos(&rat(1, 6)), CycNum::from_ratio(1, 2));
    assert_eq!(real_cos(&rat(1, 4)), CycNum::zero());
    assert_eq!(real_cos(&rat(1, 2)), CycNum::from_int(-1));
}

#[test]
fn real_sin_matches_float() {
    for (k, m) in [(1, 5), (2, 7), (3, 8), (5, 12), (7, 30)] {
        let s = real_sin(&rat(k, m));
        assert!(s.is_real());
        assert!(close(s.to_f64(), (std::f64::consts::TAU * k as f64 / m as f64).sin()));
        let c = real_cos(&rat(k, m));
        assert_eq!(s.square() + c.square(), CycNum::one());
    }
}

#[test]
fn recognize_examples() {
    assert_eq!(recognize_rational_angle(&CycNum::from_ratio(1, 2)).unwrap(), Some(rat(1, 6)));
    let golden = (CycNum::one() + sqrt5()).mul_rat(&rat(1, 4));
    assert_eq!(recognize_rational_angle(&golden).unwrap(), Some(rat(1, 10)));
    assert_eq!(recognize_rational_angle(&CycNum::from_ratio(1, 3)).unwrap(), None);
    assert_eq!(recognize_rational_angle(&CycNum::one()).unwrap(), Some(rat(0, 1)));
    assert_eq!(recognize_rational_angle(&CycNum::from_int(-1)).unwrap(), Some(rat(1, 2)));
    assert!(recognize_rational_angle(&CycNum::from_int(2)).is_err());
    assert!(recognize_rational_angle(&CycNum::zeta(4, 1)).is_err());
    // sqrt(2)/3 is real, in range, of degree 2, and not a cosine of a rational angle
    let r = sqrt_rat(&rat(2, 9)).unwrap();
    assert_eq!(recognize_rational_angle(&r).unwrap(), None);
}

#[test]
fn recognize_round_trip_up_to_sixty() {
    for m in 1..=60i64 {
        for k in 0..m {
            let q = rat(k, m);
            let x = real_cos(&q);
            let got = recognize_rational_angle(&x).unwrap().expect("recognized");
            let back = frac_part(&q);
            let alt = frac_part(&-q.clone());
            assert!(got == back || got == alt, "k/m = {k}/{m}: got {got}");
        }
    }
}

#[test]
fn product_to_sum_identity() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let a = rat(rng.gen_range(-20..=20), rng.gen_range(1..=12));
        let b = rat(rng.gen_range(-20..=20), rng.gen_range(1..=12));
        let lhs = &real_cos(&a) * &real_cos(&b);
        let rhs = (real_cos(&(&a + &b)) + real_cos(&(&a - &b))).mul_rat(&rat(1, 2));
        assert_eq!(lhs, rhs, "a={a} b={b}");
    }
}

#[test]
fn descent_to_minimal_conductor() {
    assert_eq!(CycNum::zeta(12, 3), CycNum::zeta(4, 1));
    assert_eq!(CycNum::zeta(12, 4), CycNum::zeta(3, 1));
    assert_eq!(CycNum::zeta(15, 5).conductor(), 3);
    assert_eq!(CycNum::zeta(6, 1).conductor(), 3);
    assert_eq!(CycNum::zeta(10, 1), -CycNum::zeta(5, 3));
    assert_eq!(CycNum::zeta(4, 1).square(), CycNum::from_int(-1));
    // sqrt(5) assembled in Q(zeta_20) lands in Q(zeta_5)
    let s = CycNum::zeta(20, 4) - CycNum::zeta(20, 8) - CycNum::zeta(20, 12) + CycNum::zeta(20, 16);
    assert_eq!(s.conductor(), 5);
    assert_eq!(s, sqrt5());
    // cos(2 pi/3) computed through the 120th roots
    let c = (CycNum::zeta(120, 40) + CycNum::zeta(120, 80)).mul_rat(&rat(1, 2));
    assert_eq!(c, CycNum::from_ratio(-1, 2));
    // i * sqrt(3) = 2 zeta_3 + 1
    let i3 = &CycNum::zeta(4, 1) * &sqrt_rat(&rat(3, 1)).unwrap();
    assert_eq!(i3.conductor(), 3);
    assert_eq!(i3, CycNum::zeta(3, 1).mul_int(2) + CycNum::one());
    // real and imaginary parts of zeta_7 times zeta_7^-1
    assert_eq!(CycNum::zeta(7, 3) * CycNum::zeta(7, 4), CycNum::one());
    let h = &CycNum::zeta(35, 1) * &CycNum::zeta(35, -1);
    assert!(h.is_one());
}

#[test]
fn hash_consistency_across_conductors() {
    let a = CycNum::zeta(12, 4);
    let b = CycNum::zeta(3, 1);
    assert_eq!(h(&a), h(&b));
    let c = &real_cos(&rat(1, 5)) + &(real_cos(&rat(1, 7)) - real_cos(&rat(1, 7)));
    assert_eq!(h(&c), h(&real_cos(&rat(1, 5))));
}

#[test]
fn minimal_polynomials() {
    let r2 = sqrt_rat(&rat(2, 1)).unwrap();
    assert_eq!(r2.minimal_polynomial(), RatPoly::new(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]));
    let c7 = real_cos(&rat(1, 7));
    // 8t^3 + 4t^2 - 4t - 1
    assert_eq!(
        c7.minimal_polynomial(),
        RatPoly::new(vec![rat(-1, 8), rat(-1, 2), rat(1, 2), rat(1, 1)])
    );
    assert_eq!(CycNum::zeta(5, 1).degree(), 4);
}

#[test]
fn exact_sign_near_zero() {
    // Pell convergents p/q of sqrt 2 with |sqrt2 - p/q| far below f64 resolution
    let (mut p, mut q) = (BigInt::one(), BigInt::one());
    for _ in 0..40 {
        let np = &p + BigInt::from(2) * &q;
        let nq = &p + &q;
        p = np;
        q = nq;
    }
    let r2 = sqrt_rat(&rat(2, 1)).unwrap();
    let approx = CycNum::from_rat(&Rat::new(p.clone(), q.clone()));
    let diff = &r2 - &approx;
    let expect = if (&p * &p) > BigInt::from(2) * &q * &q { Ordering::Less } else { Ordering::Greater };
    assert_eq!(diff.signum_real().unwrap(), expect);
    assert_eq!(diff.signum_sturm(), expect);
    assert_eq!((-&diff).signum_sturm(), expect.reverse());
    assert_eq!(real_cos(&rat(1, 7)).signum_sturm(), Ordering::Greater);
    assert_eq!(real_cos(&rat(2, 7)).signum_sturm(), Ordering::Less);
    assert!(CycNum::zeta(3, 1).signum_real().is_err());
}

#[test]
fn numeric_embed_examples() {
    let half = CycNum::from_ratio(1, 2).numeric_embed(64);
    assert_eq!(half.lo(), rat(1, 2));
    assert_eq!(half.hi(), rat(1, 2));
    let g = (CycNum::one() + sqrt5()).mul_rat(&rat(1, 4)).numeric_embed(128);
    let expect = (1.0 + 5f64.sqrt()) / 4.0;
    assert!(g.lo_f64() <= expect + 1e-15 && expect - 1e-15 <= g.hi_f64());
    assert!(g.width_f64() < 1e-30);
    let c8 = real_cos(&rat(1, 8));
    let a = c8.numeric_embed(64);
    let b = c8.numeric_embed(256);
    assert!(b.width_f64() <= a.width_f64());
    assert!(b.lo_f64() <= std::f64::consts::FRAC_1_SQRT_2 + 1e-15);
    assert!(b.hi_f64() >= std::f64::consts::FRAC_1_SQRT_2 - 1e-15);
}

#[test]
fn square_roots_of_rationals() {
    for (p, q) in [(2, 1), (3, 1), (5, 1), (7, 1), (12, 5), (-1, 1), (-7, 3), (9, 4), (30, 1), (11, 13)] {
        let r = rat(p, q);
        let s = sqrt_rat(&r).unwrap();
        assert_eq!(s.square(), CycNum::from_rat(&r), "sqrt({r})");
        if p > 0 {
            assert!(s.to_f64() > 0.0);
            assert!(s.is_real());
        } else {
            assert!(s.to_c64().1 > 0.0);
        }
    }
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(CycNum::one().div(&CycNum::zero()), Err(Error::DivisionByZero));
}

#[test]
fn parse_forms() {
    assert_eq!(parse_cyc("1/2").unwrap(), CycNum::from_ratio(1, 2));
    assert_eq!(parse_cyc("cos(1/6)").unwrap(), CycNum::from_ratio(1, 2));
    assert_eq!(parse_cyc("(1+sqrt(5))/4").unwrap(), (CycNum::one() + sqrt5()).mul_rat(&rat(1, 4)));
    assert_eq!(parse_cyc("-0.9").unwrap(), CycNum::from_ratio(-9, 10));
    assert_eq!(parse_cyc("zeta(4,1)*zeta(4,1)").unwrap(), CycNum::from_int(-1));
    assert!(parse_cyc("cos(").is_err());
    assert!(parse_cyc("foo(1)").is_err());
    assert!(parse_cyc("1/0").is_err());
    assert!(parse_cyc("z5").is_err());
}

#[test]
fn display_parses_back() {
    for x in [real_cos(&rat(1, 5)), sqrt5(), CycNum::zeta(12, 5), real_cos(&rat(3, 8)).mul_rat(&rat(-2, 7)), CycNum::from_ratio(-3, 4)] {
        assert_eq!(parse_cyc(&x.to_string()).unwrap(), x, "{x}");
    }
}

#[test]
fn json_round_trip() {
    let x = real_cos(&rat(1, 5));
    let s = serde_json::to_string(&x).unwrap();
    assert_eq!(s, r#"{"N":5,"c":["-1/2","0","-1/2","-1/2"]}"#);
    let back: CycNum = serde_json::from_str(&s).unwrap();
    assert_eq!(back, x);
    let short: CycNum = serde_json::from_str("\"cos(1/5)\"").unwrap();
    assert_eq!(short, x);
    let raw: CycNum = serde_json::from_str(r#"{"N":12,"c":["0","0","0","1"]}"#).unwrap();
    assert_eq!(raw, CycNum::zeta(4, 1));
}

fn small_field_element() -> impl Strategy<Value = CycNum> {
    let conductors = prop::sample::select(vec![1u32, 3, 4, 5, 8, 12, 15]);
    (conductors, prop::collection::vec((-9i64..=9, 1i64..=6), 8)).prop_map(|(n, cs)| {
        let coeffs: Vec<Rat> = cs.into_iter().map(|(p, q)| rat(p, q)).collect();
        CycNum::from_coeffs(n, &coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in small_field_element(), b in small_field_element(), c in small_field_element()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycNum::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn multiplication_agrees_with_complex_floats(a in small_field_element(), b in small_field_element()) {
        let (ar, ai) = a.to_c64();
        let (br, bi) = b.to_c64();
        let (pr, pi) = (&a * &b).to_c64();
        prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
        prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
    }

    #[test]
    fn equal_values_hash_equal(a in small_field_element(), k in 1u32..4) {
        // re-embed through a larger field and back
        let big = &a * &CycNum::zeta(7 * k, 0);
        let lifted = &(&big + &CycNum::zeta(7, 1)) - &CycNum::zeta(7, 1);
        prop_assert_eq!(&lifted, &a);
        prop_assert_eq!(h(&lifted), h(&a));
    }

    #[test]
    fn conjugation_is_complex_conjugation(a in small_field_element()) {
        let (re, im) = a.to_c64();
        let (cre, cim) = a.conj().to_c64();
        prop_assert!((re - cre).abs() < 1e-9 && (im + cim).abs() < 1e-9);
    }
}
