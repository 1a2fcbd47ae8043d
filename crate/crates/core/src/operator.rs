//! Operators on names, and the approximation system extracted from one.

use std::collections::HashMap;

use parking_lot::Mutex;

use crate::evaluator::{search, SearchOutcome};
use crate::numerics::coding_u64 as cu;
use crate::numerics::{decode_point, decode_rat, dist, NatCode, Point, Rat};
use crate::system::{ApproxSystem, Budget, Membership, Quadruple, SharedSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorOutcome {
    Value(Rat),
    OutOfBudget,
    /// The fragment has no entry at this index.
    OracleMiss(u64),
}

/// A computable map from names to names, run on finite name fragments.
///
/// Implementations must be monotone: a `Value` returned for a fragment and
/// budget is returned unchanged for every extension of the fragment and
/// every larger budget.
pub trait NameOperator: Send + Sync {
    fn input_dim(&self) -> usize;

    /// Output entry `output_index` given `fragment[l]` for `l < fragment.len()`.
    fn run(&self, fragment: &[Point], output_index: u64, budget: Budget) -> OperatorOutcome;
}

/// The evaluator of a system, seen as an operator on names.
pub struct EvaluatorOperator {
    sys: SharedSystem,
}

impl EvaluatorOperator {
    pub fn new(sys: SharedSystem) -> Self {
        EvaluatorOperator { sys }
    }
}

impl NameOperator for EvaluatorOperator {
    fn input_dim(&self) -> usize {
        self.sys.dim()
    }

    fn run(&self, fragment: &[Point], output_index: u64, budget: Budget) -> OperatorOutcome {
        let source = |l: u64| Ok(fragment.get(l as usize).cloned());
        match search(&*self.sys, source, output_index, budget) {
            Ok(SearchOutcome::Found(r)) => OperatorOutcome::Value(r.value),
            Ok(SearchOutcome::Missing(l)) => OperatorOutcome::OracleMiss(l),
            Err(_) => OperatorOutcome::OutOfBudget,
        }
    }
}

#[derive(Clone, Debug)]
enum Cached {
    Final(OperatorOutcome),
    OutOfBudget(Budget),
}

type RunKey = (Point, u64, u64, u64);

/// The system of quadruples `(a, m, b, n)` certified by an operator: some
/// fragment `g` of length `l + 1` with `2l + 1 <= m` and
/// `dist(g(k), a) < 1/(2k+2)` makes the operator output, at index `2n+1`,
/// a value within `1/(2n+2)` of `b`.
pub struct ExtractedSystem<T> {
    op: T,
    cache: Mutex<HashMap<RunKey, Cached>>,
}

pub fn system_from_operator<T: NameOperator>(op: T) -> ExtractedSystem<T> {
    ExtractedSystem {
        op,
        cache: Mutex::new(HashMap::new()),
    }
}

impl<T: NameOperator> ExtractedSystem<T> {
    pub fn operator(&self) -> &T {
        &self.op
    }

    /// Fragment `g` of length `l + 1` selected by `sel`: `sel` splits into
    /// one candidate number per entry, where candidate `0` is `a` and
    /// candidate `c > 0` is the `c`-th coded point within `1/(2k+2)` of `a`.
    /// Gives up after scanning `scan_cap` codes for a single entry.
    fn fragment(&self, a: &Point, l: u64, sel: u64, scan_cap: u64) -> Option<Vec<Point>> {
        let mut rest = sel;
        let mut g = Vec::with_capacity(l as usize + 1);
        for k in 0..=l {
            let c = if k == l {
                rest
            } else {
                let (c, r) = cu::unpair(rest);
                rest = r;
                c
            };
            g.push(self.candidate(a, k, c, scan_cap)?);
        }
        Some(g)
    }

    fn candidate(&self, a: &Point, k: u64, c: u64, scan_cap: u64) -> Option<Point> {
        if c == 0 {
            return Some(a.clone());
        }
        let radius = Rat::reciprocal_succ(2 * k + 1);
        let mut seen = 0;
        for code in 0..scan_cap {
            let p = decode_point(&NatCode::from(code), a.dim());
            if dist(&p, a).ok()? < radius {
                seen += 1;
                if seen == c {
                    return Some(p);
                }
            }
        }
        None
    }

    fn run_cached(&self, a: &Point, l: u64, sel: u64, g: &[Point], index: u64, budget: Budget) -> OperatorOutcome {
        let key = (a.clone(), l, sel, index);
        match self.cache.lock().get(&key) {
            Some(Cached::Final(out)) => return out.clone(),
            Some(Cached::OutOfBudget(tried)) if *tried >= budget => {
                return OperatorOutcome::OutOfBudget
            }
            _ => {}
        }
        let out = self.op.run(g, index, budget);
        let entry = match &out {
            OperatorOutcome::OutOfBudget => Cached::OutOfBudget(budget),
            other => Cached::Final(other.clone()),
        };
        self.cache.lock().insert(key, entry);
        out
    }
}

impl<T: NameOperator> ApproxSystem for ExtractedSystem<T> {
    fn dim(&self) -> usize {
        self.op.input_dim()
    }

    /// `k = pair(point, pair(m, pair(rat, pair(n, level))))`, accepted at
    /// budget `2^level`.
    fn enumerate(&self, k: u64) -> Option<Quadruple> {
        let (point_code, rest) = cu::unpair(k);
        let (m, rest) = cu::unpair(rest);
        let (rat_code, rest) = cu::unpair(rest);
        let (n, level) = cu::unpair(rest);
        let q = Quadruple::new(
            decode_point(&NatCode::from(point_code), self.dim()),
            m,
            decode_rat(&NatCode::from(rat_code)),
            n,
        );
        (self.semi_decide(&q, Budget::from_level(level)) == Membership::Yes).then_some(q)
    }

    /// Tries `log2(budget) + 1` (length, fragment) pairs, longest fragments
    /// first, each run with the full budget.
    fn semi_decide(&self, q: &Quadruple, budget: Budget) -> Membership {
        if q.m == 0 || q.a.dim() != self.dim() {
            return Membership::NotYet;
        }
        let Some(index) = q.n.checked_mul(2).and_then(|x| x.checked_add(1)) else {
            return Membership::NotYet;
        };
        let l_max = (q.m - 1) / 2;
        let tolerance = Rat::reciprocal_succ(index);
        let attempts = budget.steps().max(1).ilog2() as u64 + 1;
        for w in 0..attempts {
            let (i, sel) = cu::unpair(w);
            if i > l_max {
                continue;
            }
            let l = l_max - i;
            let Some(g) = self.fragment(&q.a, l, sel, budget.steps()) else {
                continue;
            };
            if let OperatorOutcome::Value(v) = self.run_cached(&q.a, l, sel, &g, index, budget) {
                if (&v - &q.b).abs() < tolerance {
                    return Membership::Yes;
                }
            }
        }
        Membership::NotYet
    }
}

impl<T> std::fmt::Debug for ExtractedSystem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtractedSystem").finish_non_exhaustive()
    }
}
