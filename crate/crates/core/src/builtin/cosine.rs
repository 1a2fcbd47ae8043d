//! Cosine through the partial sums `sigma_k`.
//!
//! `sigma_k(a)` is the midpoint of the alternating-series bracket between
//! the partial sums through degree `2k - 2` and `2k`, and
//! `a^(2k) / (2 (2k)!)` is half the bracket width. Once
//! `a^2 <= (2k+1)(2k+2)` the terms decrease, so later brackets nest inside
//! earlier ones; membership is decided by scanning `k` upward until the
//! candidate `b` is either accepted or excluded for good.

use num_bigint::BigInt;

use crate::numerics::{Point, Rat};
use crate::system::{dovetail_enumerator, DecidableSystem, Quadruple};

// Conservative stop for the exact scan; never reached for realistic inputs.
const MAX_TERMS_PAST_ADMISSIBLE: u64 = 1 << 16;

/// Exact `sigma_k(a) = (-1)^k a^(2k) / (2 (2k)!) + sum_{i<k} (-1)^i a^(2i) / (2i)!`.
pub fn sigma_k(a: &Rat, k: u64) -> Rat {
    let mut terms = SeriesTerms::new(a);
    let mut partial = Rat::zero();
    for _ in 0..k {
        partial = partial + terms.signed_term();
        terms.advance();
    }
    partial + terms.signed_term().div_int(2).expect("nonzero")
}

/// `a^(2k) / (2 (2k)!)`.
pub fn cosine_error_term(a: &Rat, k: u64) -> Rat {
    let mut fact = BigInt::from(1);
    for i in 1..=2 * k {
        fact *= i;
    }
    a.pow(2 * k as u32)
        .checked_div(&Rat::from_int(fact * 2))
        .expect("nonzero")
}

/// Walks `(-1)^i a^(2i) / (2i)!` incrementally.
struct SeriesTerms {
    a_sq: Rat,
    index: u64,
    magnitude: Rat,
}

impl SeriesTerms {
    fn new(a: &Rat) -> Self {
        SeriesTerms {
            a_sq: a * a,
            index: 0,
            magnitude: Rat::one(),
        }
    }

    fn signed_term(&self) -> Rat {
        if self.index.is_multiple_of(2) {
            self.magnitude.clone()
        } else {
            -&self.magnitude
        }
    }

    fn advance(&mut self) {
        let i = self.index;
        let denom = (2 * i + 1) * (2 * i + 2);
        self.magnitude = (&self.magnitude * &self.a_sq).div_int(denom).expect("nonzero");
        self.index += 1;
    }
}

/// `(sigma_k, error_k)` for `k = k0, k0 + 1, ...` where `k0` is the least
/// admissible index (`a^2 <= (2k+1)(2k+2)`).
struct AdmissibleBrackets {
    terms: SeriesTerms,
    partial_before: Rat,
}

impl AdmissibleBrackets {
    fn new(a: &Rat) -> Self {
        let mut state = AdmissibleBrackets {
            terms: SeriesTerms::new(a),
            partial_before: Rat::zero(),
        };
        while !state.admissible() {
            state.step();
        }
        state
    }

    fn admissible(&self) -> bool {
        let k = self.terms.index;
        let bound = Rat::from_int(BigInt::from(2 * k + 1) * BigInt::from(2 * k + 2));
        self.terms.a_sq <= bound
    }

    fn k(&self) -> u64 {
        self.terms.index
    }

    fn current(&self) -> (Rat, Rat) {
        let half = self.terms.magnitude.div_int(2).expect("nonzero");
        let signed_half = if self.terms.index.is_multiple_of(2) {
            half.clone()
        } else {
            -&half
        };
        (&self.partial_before + &signed_half, half)
    }

    fn step(&mut self) {
        self.partial_before = &self.partial_before + &self.terms.signed_term();
        self.terms.advance();
    }
}

/// Exact membership in the union over `k` of
/// `{ a^2 <= (2k+1)(2k+2), |b - sigma_k(a)| + a^(2k)/(2(2k)!) + 1/(m+1) <= 1/(n+1) }`.
pub fn cosine_decide(q: &Quadruple) -> bool {
    if q.a.dim() != 1 {
        return false;
    }
    let slack = q.output_radius() - q.input_radius();
    if slack.is_negative() {
        return false;
    }
    let a = q.a.coord(0);
    let mut brackets = AdmissibleBrackets::new(a);
    let start = brackets.k();
    loop {
        let (sigma, err) = brackets.current();
        let gap = (&q.b - &sigma).abs();
        if &gap + &err <= slack {
            return true;
        }
        // Later brackets are exact or nested inside [sigma - err, sigma + err].
        if err.is_zero() || gap > &err + &slack {
            return false;
        }
        if brackets.k() - start >= MAX_TERMS_PAST_ADMISSIBLE {
            return false;
        }
        brackets.step();
    }
}

/// `sigma_k(a)` at the first admissible `k` whose error term fits in the
/// slack `1/(n+1) - 1/(m+1)`.
fn cosine_suggest(a: &Point, m: u64, n: u64) -> Vec<Rat> {
    let slack = Rat::reciprocal_succ(n) - Rat::reciprocal_succ(m);
    if slack.is_negative() {
        return Vec::new();
    }
    let a = a.coord(0);
    if slack.is_zero() && !a.is_zero() {
        return Vec::new();
    }
    let mut brackets = AdmissibleBrackets::new(a);
    let start = brackets.k();
    loop {
        let (sigma, err) = brackets.current();
        if err <= slack {
            return vec![sigma];
        }
        if brackets.k() - start >= MAX_TERMS_PAST_ADMISSIBLE {
            return Vec::new();
        }
        brackets.step();
    }
}

pub type CosineSystem = DecidableSystem;

pub fn cosine_system() -> CosineSystem {
    dovetail_enumerator(cosine_decide, 1).with_suggestions(cosine_suggest)
}
