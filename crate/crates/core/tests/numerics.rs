use approxsys::numerics::{
    decode_point, decode_rat, dist, encode_point, encode_rat, pair3, unpair3, Point, Rat,
};
use approxsys::system::{quadruple_at, quadruple_index};
use approxsys::Quadruple;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn canonical(r: &Rat) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

fn rat() -> impl Strategy<Value = Rat> {
    (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| Rat::new(p, q).unwrap())
}

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(rat(), dim).prop_map(Point::new)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-2i64..=2, 1i64..=2).prop_map(|(p, q)| Rat::new(p, q).unwrap())
}

fn small_point() -> impl Strategy<Value = Point> {
    small_rat().prop_map(Point::scalar)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn operations_stay_canonical(a in rat(), b in rat()) {
        for r in [&a + &b, &a - &b, &a * &b, a.abs(), -&a, a.midpoint(&b)] {
            prop_assert!(canonical(&r));
        }
        if !b.is_zero() {
            prop_assert!(canonical(&a.checked_div(&b).unwrap()));
        }
        let reparsed: Rat = a.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn rat_codes_round_trip(a in rat()) {
        prop_assert_eq!(decode_rat(&encode_rat(&a)), a);
    }

    #[test]
    fn point_codes_round_trip(p in point(3)) {
        prop_assert_eq!(decode_point(&encode_point(&p), 3), p);
    }

    #[test]
    fn metric_axioms(x in point(2), y in point(2), z in point(2)) {
        let dxy = dist(&x, &y).unwrap();
        prop_assert_eq!(dist(&x, &x).unwrap(), Rat::zero());
        prop_assert_eq!(dxy.is_zero(), x == y);
        prop_assert_eq!(&dxy, &dist(&y, &x).unwrap());
        prop_assert!(dxy <= dist(&x, &z).unwrap() + dist(&z, &y).unwrap());
    }

    #[test]
    fn quadruple_codes_round_trip(a in small_point(), m in 0u64..4, b in small_rat(), n in 0u64..4) {
        let q = Quadruple::new(a, m, b, n);
        let k = quadruple_index(&q).to_u64().expect("small quadruples have u64 codes");
        prop_assert_eq!(quadruple_at(k, 1), q);
    }
}

#[test]
fn pair3_is_a_bijection_up_to_1e5() {
    for k in 0..100_000u64 {
        let (x, y, z) = pair3(k);
        assert_eq!(unpair3(x, y, z), Some(k));
    }
}

#[test]
fn spec_arithmetic_examples() {
    let q = |s: &str| s.parse::<Rat>().unwrap();
    assert_eq!(q("1/3") + q("1/6"), q("1/2"));
    assert_eq!(q("0") * q("7/5"), Rat::zero());
    assert_eq!(Rat::one().checked_div(&Rat::from(3)).unwrap(), q("1/3"));
    assert!(Rat::new(1, 0).is_err());
    let p = |s: &str| Point::parse_list(s).unwrap();
    assert_eq!(dist(&p("1,3"), &p("1,3")).unwrap(), Rat::zero());
    assert_eq!(dist(&p("0,0"), &p("1/2,-1/3")).unwrap(), q("1/2"));
    assert_eq!(dist(&p("2/3"), &p("-1/4")).unwrap(), q("11/12"));
    assert!(dist(&p("1"), &p("1,2")).is_err());
}

#[test]
fn scalar_points_use_rational_codes() {
    for k in 0..1000u64 {
        let code = k.into();
        assert_eq!(decode_point(&code, 1), Point::scalar(decode_rat(&code)));
    }
    let huge = Rat::from_int(BigInt::from(10).pow(40)) + "1/7".parse::<Rat>().unwrap();
    assert_eq!(decode_rat(&encode_rat(&huge)), huge);
}
