//! Quotient `xi1 / xi2` on `xi2 != 0`.

use crate::numerics::{decode_point, coding_u64, NatCode, Point, Rat};
use crate::system::{dovetail_enumerator, ApproxSystem, DecidableSystem, Quadruple};

/// `a2 * b = a1` and `(m+1)|a2| >= 1 + (n+1)(|b|+1)`.
pub fn division_decide(q: &Quadruple) -> bool {
    if q.a.dim() != 2 {
        return false;
    }
    let (a1, a2) = (q.a.coord(0), q.a.coord(1));
    if &(a2 * &q.b) != a1 {
        return false;
    }
    let lhs = a2.abs().mul_int(q.m + 1);
    let rhs = Rat::one() + (q.b.abs() + Rat::one()).mul_int(q.n + 1);
    lhs >= rhs
}

/// Division system whose enumeration derives `b = a1/a2` from `(a, m, n)`,
/// so every index is dense in members.
#[derive(Clone, Copy, Debug, Default)]
pub struct DivisionSystem;

pub fn division_system() -> DivisionSystem {
    DivisionSystem
}

impl ApproxSystem for DivisionSystem {
    fn dim(&self) -> usize {
        2
    }

    fn enumerate(&self, k: u64) -> Option<Quadruple> {
        let (point_code, rest) = coding_u64::unpair(k);
        let (m, n) = coding_u64::unpair(rest);
        let a = decode_point(&NatCode::from(point_code), 2);
        let b = a.coord(0).checked_div(a.coord(1)).ok()?;
        let q = Quadruple { a, m, b, n };
        division_decide(&q).then_some(q)
    }

    fn decide(&self, q: &Quadruple) -> Option<bool> {
        Some(division_decide(q))
    }

    fn suggest(&self, a: &Point, _m: u64, _n: u64) -> Vec<Rat> {
        a.coord(0).checked_div(a.coord(1)).into_iter().collect()
    }
}

/// The four values `((m+1)a1 ± 1) / ((m+1)a2 ± 1)`, or `None` when
/// `(m+1)|a2| <= 1`.
pub fn division_corners(a: &Point, m: u64) -> Option<[Rat; 4]> {
    let scaled1 = a.coord(0).mul_int(m + 1);
    let scaled2 = a.coord(1).mul_int(m + 1);
    if scaled2.abs() <= Rat::one() {
        return None;
    }
    let one = Rat::one();
    let quot = |x: Rat, y: Rat| x.checked_div(&y).expect("|(m+1)a2| > 1");
    Some([
        quot(&scaled1 + &one, &scaled2 + &one),
        quot(&scaled1 + &one, &scaled2 - &one),
        quot(&scaled1 - &one, &scaled2 + &one),
        quot(&scaled1 - &one, &scaled2 - &one),
    ])
}

/// `(m+1)|a2| > 1` and all four corner quotients lie in the closed
/// interval `[b - 1/(n+1), b + 1/(n+1)]`.
pub fn maximal_division_decide(q: &Quadruple) -> bool {
    if q.a.dim() != 2 {
        return false;
    }
    let Some(corners) = division_corners(&q.a, q.m) else {
        return false;
    };
    let v = q.output_radius();
    let (lo, hi) = (&q.b - &v, &q.b + &v);
    corners.iter().all(|c| &lo <= c && c <= &hi)
}

pub fn maximal_division_system() -> DecidableSystem {
    dovetail_enumerator(maximal_division_decide, 2).with_suggestions(|a, m, _n| {
        match division_corners(a, m) {
            Some(corners) => {
                let lo = corners.iter().min().expect("four corners").clone();
                let hi = corners.iter().max().expect("four corners").clone();
                vec![lo.midpoint(&hi)]
            }
            None => Vec::new(),
        }
    })
}
