//! Approximation systems: sets of quadruples `(a, m, b, n)` presented by a
//! budgeted membership semi-decision and a total enumeration.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    decode_point, decode_rat, encode_point, encode_rat, pair, NatCode, Point, Rat,
};
use crate::numerics::{coding_u64 as cu, dist};

/// One element `(a, m, b, n)`: every `xi` within `1/(m+1)` of `a` is mapped
/// within `1/(n+1)` of `b`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadruple {
    pub a: Point,
    pub m: u64,
    pub b: Rat,
    pub n: u64,
}

impl Quadruple {
    pub fn new(a: Point, m: u64, b: Rat, n: u64) -> Self {
        Quadruple { a, m, b, n }
    }

    /// Input radius `1/(m+1)`.
    pub fn input_radius(&self) -> Rat {
        Rat::reciprocal_succ(self.m)
    }

    /// Output precision `1/(n+1)`.
    pub fn output_radius(&self) -> Rat {
        Rat::reciprocal_succ(self.n)
    }

    /// Whether `xi` lies in the open input ball around `a`.
    pub fn covers(&self, xi: &Point) -> Result<bool> {
        Ok(dist(&self.a, xi)? < self.input_radius())
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} m={} b={} n={}", self.a, self.m, self.b, self.n)
    }
}

impl fmt::Debug for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.m, self.b, self.n)
    }
}

/// A step allowance for semi-decisions and searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Budget(pub u64);

impl Budget {
    pub const UNLIMITED: Budget = Budget(u64::MAX);

    pub fn steps(self) -> u64 {
        self.0
    }

    /// `2^level` steps, saturating.
    pub fn from_level(level: u64) -> Budget {
        Budget(1u64.checked_shl(level as u32).filter(|_| level < 64).unwrap_or(u64::MAX))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    NotYet,
}

impl From<bool> for Membership {
    fn from(b: bool) -> Self {
        if b {
            Membership::Yes
        } else {
            Membership::NotYet
        }
    }
}

/// A recursively enumerable set of quadruples over `Q^dim x N x Q x N`.
///
/// Implementations must keep `enumerate` and the membership semi-decision
/// consistent: every enumerated quadruple is eventually accepted, and every
/// accepted quadruple is enumerated at some index.
pub trait ApproxSystem: Send + Sync {
    fn dim(&self) -> usize;

    /// The `k`-th enumerated element, or a gap.
    fn enumerate(&self, k: u64) -> Option<Quadruple>;

    /// Exact decision procedure, when the set is decidable.
    fn decide(&self, _q: &Quadruple) -> Option<bool> {
        None
    }

    /// Budgeted semi-decision used when [`ApproxSystem::decide`] is absent.
    /// Defaults to scanning the first `budget + 1` enumerated elements.
    fn semi_decide(&self, q: &Quadruple, budget: Budget) -> Membership {
        let found = (0..=budget.steps()).any(|k| self.enumerate(k).as_ref() == Some(q));
        found.into()
    }

    /// Candidate outputs `b` worth trying first for input `a` at `(m, n)`.
    /// Only a search-order hint: candidates are still checked by membership.
    fn suggest(&self, _a: &Point, _m: u64, _n: u64) -> Vec<Rat> {
        Vec::new()
    }
}

pub type SharedSystem = Arc<dyn ApproxSystem>;

/// `sys.enumerate(k)`.
pub fn enumerate(sys: &dyn ApproxSystem, k: u64) -> Option<Quadruple> {
    sys.enumerate(k)
}

/// Membership at `budget`: the decision procedure when one exists, otherwise
/// the system's semi-decision. Monotone in `budget`.
pub fn membership(sys: &dyn ApproxSystem, q: &Quadruple, budget: Budget) -> Result<Membership> {
    Error::check_dim(sys.dim(), q.a.dim())?;
    Ok(match sys.decide(q) {
        Some(b) => b.into(),
        None => sys.semi_decide(q, budget),
    })
}

/// The quadruple coded by `k = pair(point_code, pair(m, pair(rat_code, n)))`.
pub fn quadruple_at(k: u64, dim: usize) -> Quadruple {
    let (point_code, rest) = cu::unpair(k);
    let (m, rest) = cu::unpair(rest);
    let (rat_code, n) = cu::unpair(rest);
    Quadruple {
        a: decode_point(&NatCode::from(point_code), dim),
        m,
        b: decode_rat(&NatCode::from(rat_code)),
        n,
    }
}

/// Canonical index of `q` in the [`quadruple_at`] order.
pub fn quadruple_index(q: &Quadruple) -> NatCode {
    let tail = pair(&encode_rat(&q.b).0, &q.n.into());
    let tail = pair(&q.m.into(), &tail);
    NatCode(pair(&encode_point(&q.a).0, &tail))
}

type DecideFn = dyn Fn(&Quadruple) -> bool + Send + Sync;
type SuggestFn = dyn Fn(&Point, u64, u64) -> Vec<Rat> + Send + Sync;

/// The standard enumeration of a decidable set: index `k` decodes to a
/// candidate quadruple, which is emitted when the predicate accepts it.
#[derive(Clone)]
pub struct DecidableSystem {
    dim: usize,
    decide: Arc<DecideFn>,
    suggest: Option<Arc<SuggestFn>>,
}

impl DecidableSystem {
    pub fn with_suggestions<F>(mut self, suggest: F) -> Self
    where
        F: Fn(&Point, u64, u64) -> Vec<Rat> + Send + Sync + 'static,
    {
        self.suggest = Some(Arc::new(suggest));
        self
    }
}

/// Wraps a total, deterministic predicate as an enumerable system.
pub fn dovetail_enumerator<F>(decide: F, dim: usize) -> DecidableSystem
where
    F: Fn(&Quadruple) -> bool + Send + Sync + 'static,
{
    DecidableSystem {
        dim,
        decide: Arc::new(decide),
        suggest: None,
    }
}

impl ApproxSystem for DecidableSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn enumerate(&self, k: u64) -> Option<Quadruple> {
        let q = quadruple_at(k, self.dim);
        (self.decide)(&q).then_some(q)
    }

    fn decide(&self, q: &Quadruple) -> Option<bool> {
        Some((self.decide)(q))
    }

    fn suggest(&self, a: &Point, m: u64, n: u64) -> Vec<Rat> {
        self.suggest.as_ref().map(|s| s(a, m, n)).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_full_predicates() {
        let empty = dovetail_enumerator(|_| false, 2);
        assert!((0..1000).all(|k| empty.enumerate(k).is_none()));
        let full = dovetail_enumerator(|_| true, 1);
        for k in 0..1000 {
            let q = full.enumerate(k).unwrap();
            assert_eq!(quadruple_index(&q).to_u64().map(|i| quadruple_at(i, 1)), Some(q));
        }
    }

    #[test]
    fn quadruple_coding_round_trips() {
        for k in (0..200_000).step_by(997) {
            let q = quadruple_at(k, 2);
            let back = quadruple_index(&q).to_u64().unwrap();
            assert_eq!(quadruple_at(back, 2), q);
        }
    }

    #[test]
    fn dimension_checked() {
        let sys = dovetail_enumerator(|_| true, 2);
        let q = Quadruple::new(Point::scalar(Rat::zero()), 0, Rat::zero(), 0);
        assert!(matches!(
            membership(&sys, &q, Budget(1)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn default_semi_decision_scans_enumeration() {
        struct Listed(Vec<Quadruple>);
        impl ApproxSystem for Listed {
            fn dim(&self) -> usize {
                1
            }
            fn enumerate(&self, k: u64) -> Option<Quadruple> {
                self.0.get(k as usize).cloned()
            }
        }
        let q = |m| Quadruple::new(Point::scalar(Rat::zero()), m, Rat::zero(), 0);
        let sys = Listed(vec![q(0), q(1), q(2)]);
        assert_eq!(membership(&sys, &q(2), Budget(1)).unwrap(), Membership::NotYet);
        assert_eq!(membership(&sys, &q(2), Budget(2)).unwrap(), Membership::Yes);
        assert_eq!(membership(&sys, &q(2), Budget(1000)).unwrap(), Membership::Yes);
        assert_eq!(membership(&sys, &q(7), Budget(1000)).unwrap(), Membership::NotYet);
    }

    #[test]
    fn budget_levels() {
        assert_eq!(Budget::from_level(0), Budget(1));
        assert_eq!(Budget::from_level(10), Budget(1024));
        assert_eq!(Budget::from_level(64), Budget::UNLIMITED);
        assert_eq!(Budget::from_level(1000), Budget::UNLIMITED);
    }
}
