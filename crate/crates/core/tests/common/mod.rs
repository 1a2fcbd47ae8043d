//! Reference computations shared by the integration tests. Nothing here
//! calls into the library's own series or decision code.

#![allow(dead_code)]

use approxsys::Rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(r: &Rat) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

pub fn rat(b: &BigRational) -> Rat {
    Rat::new(b.numer().clone(), b.denom().clone()).unwrap()
}

pub fn q(s: &str) -> Rat {
    s.parse().unwrap()
}

/// `(s, e)` with `|cos x - s| <= e` and `e <= tol`, from Taylor partial
/// sums and the alternating-series remainder once terms decrease.
pub fn cos_taylor(x: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
    let x2 = x * x;
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut i = 0u64;
    loop {
        let decreasing = x2 <= BigRational::from_integer(BigInt::from((2 * i + 1) * (2 * i + 2)));
        if decreasing && term <= *tol {
            return (sum, term);
        }
        if i.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = term * &x2 / BigRational::from_integer(BigInt::from((2 * i + 1) * (2 * i + 2)));
        i += 1;
    }
}

/// Closed enclosure `[lo, hi]` of `cos x`.
pub fn cos_enclosure(x: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
    let (s, e) = cos_taylor(x, tol);
    (&s - &e, &s + &e)
}

/// Enclosure of `cos(cos 1)`: cos is decreasing on `[0, 1]`, which contains
/// the inner enclosure.
pub fn cos_cos_one(tol: &BigRational) -> (BigRational, BigRational) {
    let (lo1, hi1) = cos_enclosure(&BigRational::one(), tol);
    assert!(lo1.is_positive() && hi1 < BigRational::one());
    let (lo, _) = cos_enclosure(&hi1, tol);
    let (_, hi) = cos_enclosure(&lo1, tol);
    (lo, hi)
}

/// Whether every point of `[lo, hi]` is strictly within `radius` of `v`.
pub fn enclosure_within(v: &BigRational, lo: &BigRational, hi: &BigRational, radius: &BigRational) -> bool {
    (v - lo).abs() < *radius && (v - hi).abs() < *radius
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}
