mod common;

use std::sync::Arc;

use approxsys::builtin::{
    cosine_decide, cosine_system, division_decide, division_system, maximal_division_decide,
    maximal_division_system, semialgebraic_system, squaring_formula, Polynomial,
};
use approxsys::numerics::{encode_point, pair};
use approxsys::operator::{system_from_operator, EvaluatorOperator};
use approxsys::system::{membership, quadruple_at, quadruple_index};
use approxsys::{ApproxSystem, Budget, Membership, Point, Quadruple, Rat};
use common::{big, cos_taylor, q};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn recip_succ(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n) + 1)
}

fn random_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    Rat::new(rng.random_range(-num..=num), rng.random_range(1..=den)).unwrap()
}

fn ref_division(a1: &BigRational, a2: &BigRational, m: u64, b: &BigRational, n: u64) -> bool {
    if a2 * b != *a1 {
        return false;
    }
    let lhs = a2.abs() * BigRational::from_integer((m + 1).into());
    let rhs = BigRational::one() + (b.abs() + BigRational::one()) * BigRational::from_integer((n + 1).into());
    lhs >= rhs
}

/// The image of the closed input box under `x/y`, when `y` keeps its sign,
/// sits in the closed output ball. `x/y` is monotone in each coordinate on
/// such a box, so its extremes are at the corners.
fn ref_max_division(a1: &BigRational, a2: &BigRational, m: u64, b: &BigRational, n: u64) -> bool {
    let u = recip_succ(m);
    let (ylo, yhi) = (a2 - &u, a2 + &u);
    if !(ylo.is_positive() || yhi.is_negative()) {
        return false;
    }
    let v = recip_succ(n);
    [a1 - &u, a1 + &u]
        .iter()
        .flat_map(|x| [x / &ylo, x / &yhi])
        .all(|c| (&c - b).abs() <= v)
}

/// Union over admissible `k < 60` of the nested-bracket acceptance test,
/// with the series terms built directly from factorials.
fn ref_cosine(a: &BigRational, m: u64, b: &BigRational, n: u64) -> bool {
    let slack = recip_succ(n) - recip_succ(m);
    let terms: Vec<BigRational> = (0..=60u64)
        .map(|i| {
            let t = a.pow(2 * i as i32) / BigRational::from_integer(common::factorial(2 * i));
            if i % 2 == 0 { t } else { -t }
        })
        .collect();
    let mut partial = BigRational::zero();
    for k in 0..60u64 {
        if a * a <= BigRational::from_integer(((2 * k + 1) * (2 * k + 2)).into()) {
            let half = &terms[k as usize] / BigRational::from_integer(2.into());
            let sigma = &partial + &half;
            if (b - sigma).abs() + half.abs() <= slack {
                return true;
            }
        }
        partial += &terms[k as usize];
    }
    false
}

#[test]
fn division_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut members, mut total) = (0, 0);
    for _ in 0..10_000 {
        let a1 = random_rat(&mut rng, 50, 20);
        let a2 = random_rat(&mut rng, 50, 20);
        let (m, n) = (rng.random_range(0..400), rng.random_range(0..60));
        // Half the time aim b at the quotient so both branches are exercised.
        let b = match (rng.random_bool(0.5), a1.checked_div(&a2)) {
            (true, Ok(b)) => b,
            _ => random_rat(&mut rng, 50, 20),
        };
        let quad = Quadruple::new(Point::new(vec![a1.clone(), a2.clone()]), m, b.clone(), n);
        let expect = ref_division(&big(&a1), &big(&a2), m, &big(&b), n);
        assert_eq!(division_decide(&quad), expect, "{quad}");
        members += expect as u32;
        total += 1;
    }
    assert!(members > 500 && members < total);
}

#[test]
fn maximal_division_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut members = 0;
    for _ in 0..10_000 {
        let a1 = random_rat(&mut rng, 20, 8);
        let a2 = random_rat(&mut rng, 20, 8);
        let (m, n) = (rng.random_range(0..200), rng.random_range(0..20));
        let b = match a1.checked_div(&a2) {
            Ok(b) if rng.random_bool(0.7) => b + random_rat(&mut rng, 1, 50),
            _ => random_rat(&mut rng, 20, 8),
        };
        let quad = Quadruple::new(Point::new(vec![a1.clone(), a2.clone()]), m, b.clone(), n);
        let expect = ref_max_division(&big(&a1), &big(&a2), m, &big(&b), n);
        assert_eq!(maximal_division_decide(&quad), expect, "{quad}");
        members += expect as u32;
    }
    assert!(members > 300);
}

#[test]
fn cosine_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut members = 0;
    for _ in 0..1_000 {
        let a = random_rat(&mut rng, 20, 5);
        let (m, n) = (rng.random_range(0..2000), rng.random_range(0..300));
        let (c, _) = cos_taylor(&big(&a), &brat(1, 1_000_000_000));
        let offset = brat(rng.random_range(-100..=100), 100) * recip_succ(n);
        let b = common::rat(&(c + offset));
        let quad = Quadruple::new(Point::scalar(a.clone()), m, b.clone(), n);
        let expect = ref_cosine(&big(&a), m, &big(&b), n);
        assert_eq!(cosine_decide(&quad), expect, "{quad}");
        members += expect as u32;
    }
    assert!(members > 100);
}

#[test]
fn cosine_members_bound_the_true_error() {
    // For every member, the whole input ball maps into the output ball.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let sys = cosine_system();
    let tol = brat(1, 1_000_000_000_000);
    let mut checked = 0;
    for _ in 0..500 {
        let a = random_rat(&mut rng, 16, 4);
        let (m, n) = (rng.random_range(1..500), rng.random_range(0..50));
        for b in sys.suggest(&Point::scalar(a.clone()), m, n) {
            let quad = Quadruple::new(Point::scalar(a.clone()), m, b.clone(), n);
            assert!(cosine_decide(&quad));
            let u = recip_succ(m);
            for t in -4i64..=4 {
                let xi = big(&a) + &u * brat(t, 5);
                let (c, e) = cos_taylor(&xi, &tol);
                assert!((c - big(&b)).abs() + e < recip_succ(n), "{quad} at {xi}");
            }
            checked += 1;
        }
    }
    assert!(checked > 100);
}

/// Evaluates `sum c * prod x_i^e_i` term by term, with powers by repeated
/// multiplication.
fn ref_poly_eval(terms: &[(BigInt, Vec<u32>)], x: &[BigRational]) -> BigRational {
    let mut total = BigRational::zero();
    for (c, exps) in terms {
        let mut t = BigRational::from_integer(c.clone());
        for (xi, &e) in x.iter().zip(exps) {
            for _ in 0..e {
                t *= xi;
            }
        }
        total += t;
    }
    total
}

#[test]
fn polynomial_eval_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let nvars = rng.random_range(1..5);
        let terms: Vec<(BigInt, Vec<u32>)> = (0..rng.random_range(0..6))
            .map(|_| {
                let c = BigInt::from(rng.random_range(-20i64..=20));
                (c, (0..nvars).map(|_| rng.random_range(0..5)).collect())
            })
            .collect();
        let x: Vec<Rat> = (0..nvars).map(|_| random_rat(&mut rng, 9, 7)).collect();
        let p = Polynomial::new(nvars, terms.clone()).unwrap();
        let xb: Vec<BigRational> = x.iter().map(big).collect();
        assert_eq!(big(&p.eval(&x).unwrap()), ref_poly_eval(&terms, &xb));
    }
}

#[test]
fn squaring_membership_at_three_halves() {
    // With a = 3/2 and b = 9/4 the ball image [(a-u)^2, (a+u)^2] fits iff
    // 3u + u^2 <= v.
    let sys = semialgebraic_system(squaring_formula());
    for m in 0..60u64 {
        for n in 0..60u64 {
            let quad = Quadruple::new(Point::scalar(q("3/2")), m, q("9/4"), n);
            let u = recip_succ(m);
            let expect = brat(3, 1) * &u + &u * &u <= recip_succ(n);
            assert_eq!(sys.decide(&quad), Some(expect), "m={m} n={n}");
        }
    }
}

#[test]
fn enumeration_reaches_a_known_member() {
    let a = Point::parse_list("1,3").unwrap();
    let quad = Quadruple::new(a.clone(), 1, q("1/3"), 2);
    assert!(division_decide(&quad));
    let k = pair(&encode_point(&a).0, &pair(&BigUint::from(1u32), &BigUint::from(2u32)));
    let k = k.to_u64().unwrap();
    assert_eq!(division_system().enumerate(k), Some(quad.clone()));

    // Decidable systems place every member at its canonical code.
    let max_member = Quadruple::new(Point::parse_list("1,3").unwrap(), 9, q("1/3"), 1);
    let k = quadruple_index(&max_member).to_u64().unwrap();
    assert_eq!(maximal_division_system().enumerate(k), Some(max_member));
}

#[test]
fn enumerated_quadruples_are_members() {
    let systems: Vec<(&str, Arc<dyn ApproxSystem>)> = vec![
        ("division", Arc::new(division_system())),
        ("max-division", Arc::new(maximal_division_system())),
        ("cosine", Arc::new(cosine_system())),
        ("square", Arc::new(semialgebraic_system(squaring_formula()))),
    ];
    for (name, sys) in &systems {
        let mut found = 0;
        for k in 0..20_000u64 {
            if let Some(quad) = sys.enumerate(k) {
                assert_eq!(sys.decide(&quad), Some(true), "{name} {k}");
                found += 1;
            }
        }
        assert!(found > 0, "{name}");
    }
    // And every coded member is emitted at its own code.
    for (name, sys) in &systems[1..] {
        for k in 0..20_000u64 {
            let quad = quadruple_at(k, sys.dim());
            if sys.decide(&quad) == Some(true) {
                assert_eq!(sys.enumerate(k), Some(quad), "{name} {k}");
            }
        }
    }
}

#[test]
fn semi_decision_is_monotone_in_budget() {
    let sys = system_from_operator(EvaluatorOperator::new(Arc::new(division_system())));
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut yes = 0;
    for _ in 0..40 {
        let a = Point::new(vec![random_rat(&mut rng, 5, 3), Rat::new(rng.random_range(1..5), 1).unwrap()]);
        let b = a.coord(0).checked_div(a.coord(1)).unwrap() + random_rat(&mut rng, 1, 40);
        let quad = Quadruple::new(a, 31, b, rng.random_range(0..8));
        let mut seen_yes = false;
        for level in 0..12 {
            let m = membership(&sys, &quad, Budget::from_level(level)).unwrap();
            if seen_yes {
                assert_eq!(m, Membership::Yes, "{quad} level {level}");
            }
            seen_yes |= m == Membership::Yes;
        }
        yes += seen_yes as u32;
    }
    assert!(yes > 0);
}

#[test]
fn enumeration_is_deterministic() {
    let a = cosine_system();
    let b = cosine_system();
    for k in 0..5000 {
        assert_eq!(a.enumerate(k), b.enumerate(k));
    }
    let x = system_from_operator(EvaluatorOperator::new(Arc::new(division_system())));
    let y = system_from_operator(EvaluatorOperator::new(Arc::new(division_system())));
    for k in 0..3000 {
        assert_eq!(x.enumerate(k), y.enumerate(k));
    }
}
