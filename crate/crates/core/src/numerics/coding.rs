//! Cantor-style codings of naturals, rationals and rational points.
//!
//! A rational code `j` unpairs to a triple `(r, s, t)` and denotes
//! `(r - s) / (t + 1)`. Every natural is a valid code, so the notation is
//! total and surjective (but not injective).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{Point, Rat};

/// A natural number used as a code.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatCode(pub BigUint);

impl NatCode {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for NatCode {
    fn from(v: u64) -> Self {
        NatCode(BigUint::from(v))
    }
}

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let w = x + y;
    ((&w * (&w + 1u32)) >> 1) + y
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) >> 1;
    let t = (&w * (&w + 1u32)) >> 1;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub(crate) fn pair_u64(x: u64, y: u64) -> Option<u64> {
    let w = x as u128 + y as u128;
    u64::try_from(w * (w + 1) / 2 + y as u128).ok()
}

pub(crate) fn unpair_u64(z: u64) -> (u64, u64) {
    let w = (((z as u128) * 8 + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = z as u128 - t;
    ((w - y) as u64, y as u64)
}

/// The triple indexed by `k`: `k` unpairs to `(x, w)` and `w` to `(y, z)`.
/// Every triple of naturals occurs exactly once.
pub fn pair3(k: u64) -> (u64, u64, u64) {
    let (x, w) = unpair_u64(k);
    let (y, z) = unpair_u64(w);
    (x, y, z)
}

/// Index of a triple; inverse of [`pair3`]. `None` on `u64` overflow.
pub fn unpair3(x: u64, y: u64, z: u64) -> Option<u64> {
    pair_u64(x, pair_u64(y, z)?)
}

fn big_triple(code: &BigUint) -> (BigUint, BigUint, BigUint) {
    let (x, w) = unpair(code);
    let (y, z) = unpair(&w);
    (x, y, z)
}

/// `(r - s) / (t + 1)` where `(r, s, t)` is the triple coded by `code`.
pub fn decode_rat(code: &NatCode) -> Rat {
    if let Some(k) = code.to_u64() {
        let (r, s, t) = pair3(k);
        let numer = BigInt::from(r) - BigInt::from(s);
        return Rat::new(numer, BigInt::from(t) + 1u32).expect("t + 1 > 0");
    }
    let (r, s, t) = big_triple(&code.0);
    let numer = BigInt::from(r) - BigInt::from(s);
    Rat::new(numer, BigInt::from(t) + 1u32).expect("t + 1 > 0")
}

/// Canonical code of `x = p/q`: `r = max(p, 0)`, `s = max(-p, 0)`, `t = q - 1`.
pub fn encode_rat(x: &Rat) -> NatCode {
    let p = x.numer();
    let (r, s) = if p.is_negative() {
        (BigUint::zero(), p.magnitude().clone())
    } else {
        (p.magnitude().clone(), BigUint::zero())
    };
    let t = x.denom().magnitude() - BigUint::one();
    NatCode(pair(&r, &pair(&s, &t)))
}

/// Codes an `N`-tuple by right-nested pairing of coordinate codes. The
/// one-dimensional case coincides with [`encode_rat`].
pub fn encode_point(p: &Point) -> NatCode {
    let coords = p.coords();
    assert!(!coords.is_empty(), "points have at least one coordinate");
    let mut acc = encode_rat(&coords[coords.len() - 1]).0;
    for c in coords[..coords.len() - 1].iter().rev() {
        acc = pair(&encode_rat(c).0, &acc);
    }
    NatCode(acc)
}

/// Total inverse of [`encode_point`] for dimension `dim >= 1`.
pub fn decode_point(code: &NatCode, dim: usize) -> Point {
    assert!(dim >= 1, "points have at least one coordinate");
    let mut coords = Vec::with_capacity(dim);
    let mut rest = code.0.clone();
    for _ in 1..dim {
        let (head, tail) = unpair(&rest);
        coords.push(decode_rat(&NatCode(head)));
        rest = tail;
    }
    coords.push(decode_rat(&NatCode(rest)));
    Point::new(coords)
}
