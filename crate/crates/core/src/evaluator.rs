//! Evaluation of an approximation system along a name of its argument.
//!
//! `apply` dovetails over `(l, j, s) = pair3(k)`: the `l`-th approximation
//! `a` of the argument, the `j`-th output candidate `b` and a membership
//! budget of `2^s` steps. The first `(a, l, b, n)` found in the system
//! yields `b`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::names::OrdinaryName;
use crate::numerics::{decode_rat, pair3, NatCode, Point, Rat};
use crate::system::{ApproxSystem, Budget, Membership, Quadruple, SharedSystem};

/// Environment variable overriding [`DEFAULT_BUDGET_BASE`].
pub const BUDGET_ENV: &str = "APPROXSYS_DEFAULT_BUDGET";
pub const DEFAULT_BUDGET_BASE: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Rat,
    /// The `n` with `|value - theta(xi)| < 1/(n+1)`.
    pub precision_index: u64,
    pub search_steps: u64,
}

/// Budget per output index.
pub type BudgetSchedule = Arc<dyn Fn(u64) -> Budget + Send + Sync>;

/// `base * 2^n`, saturating.
pub fn geometric_schedule(base: u64) -> BudgetSchedule {
    Arc::new(move |n| {
        let factor = 1u64.checked_shl(n as u32).filter(|_| n < 64);
        Budget(factor.map_or(u64::MAX, |f| base.saturating_mul(f)))
    })
}

/// The schedule base from [`BUDGET_ENV`], or [`DEFAULT_BUDGET_BASE`].
pub fn default_budget_base() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::parse(&v, "expected a non-negative integer budget")),
        Err(_) => Ok(DEFAULT_BUDGET_BASE),
    }
}

pub fn default_schedule() -> Result<BudgetSchedule> {
    Ok(geometric_schedule(default_budget_base()?))
}

pub(crate) enum SearchOutcome {
    Found(EvalResult),
    /// The point source had no entry at this index.
    Missing(u64),
}

/// Output candidate `j` at input `a`: the system's suggestions first, then
/// every rational in code order.
struct Candidates<'a> {
    sys: &'a dyn ApproxSystem,
    n: u64,
    cache: HashMap<u64, (Point, Vec<Rat>)>,
}

impl<'a> Candidates<'a> {
    fn insert(&mut self, l: u64, a: Point) {
        let suggested = self.sys.suggest(&a, l, self.n);
        self.cache.insert(l, (a, suggested));
    }
}

/// The dovetailed search behind [`apply`], over an arbitrary point source.
pub(crate) fn search<P>(
    sys: &dyn ApproxSystem,
    mut point_at: P,
    n: u64,
    budget: Budget,
) -> Result<SearchOutcome>
where
    P: FnMut(u64) -> Result<Option<Point>>,
{
    let mut candidates = Candidates {
        sys,
        n,
        cache: HashMap::new(),
    };
    let mut decidable = None;
    for k in 0..budget.steps() {
        let (l, j, s) = pair3(k);
        if s > 0 && decidable == Some(true) {
            continue;
        }
        if !candidates.cache.contains_key(&l) {
            match point_at(l)? {
                Some(a) => {
                    Error::check_dim(sys.dim(), a.dim())?;
                    candidates.insert(l, a);
                }
                None => return Ok(SearchOutcome::Missing(l)),
            }
        }
        let (a, suggested) = &candidates.cache[&l];
        let b = match suggested.get(j as usize) {
            Some(b) => b.clone(),
            None => decode_rat(&NatCode::from(j - suggested.len() as u64)),
        };
        let q = Quadruple::new(a.clone(), l, b, n);
        let member = match sys.decide(&q) {
            Some(yes) => {
                decidable = Some(true);
                yes
            }
            None => {
                decidable = Some(false);
                sys.semi_decide(&q, Budget::from_level(s)) == Membership::Yes
            }
        };
        if member {
            return Ok(SearchOutcome::Found(EvalResult {
                value: q.b,
                precision_index: n,
                search_steps: k + 1,
            }));
        }
    }
    Err(Error::Timeout {
        steps: budget.steps(),
    })
}

/// A value within `1/(n+1)` of `theta(xi)`, where `f` names `xi`.
///
/// Fails with [`Error::Timeout`] when `budget` search steps do not suffice,
/// which includes every `xi` outside the domain.
pub fn apply(
    sys: &dyn ApproxSystem,
    f: &OrdinaryName,
    n: u64,
    budget: Budget,
) -> Result<EvalResult> {
    Error::check_dim(sys.dim(), f.dim())?;
    match search(sys, |l| f.approx(l).map(Some), n, budget)? {
        SearchOutcome::Found(r) => Ok(r),
        SearchOutcome::Missing(l) => unreachable!("names are total, index {l}"),
    }
}

/// The name `n -> apply(sys, f, n, schedule(n)).value` of `theta(xi)`.
pub fn eval_name(sys: SharedSystem, f: OrdinaryName, schedule: BudgetSchedule) -> Result<OrdinaryName> {
    Error::check_dim(sys.dim(), f.dim())?;
    Ok(OrdinaryName::new(1, move |n| {
        apply(&*sys, &f, n, schedule(n)).map(|r| Point::scalar(r.value))
    }))
}

/// Names `outer_0(outer_1(...(inner(xi))))` for `chain = [outer_0, ..., inner]`.
pub fn compose(chain: &[SharedSystem], f: OrdinaryName, schedule: BudgetSchedule) -> Result<OrdinaryName> {
    let Some((inner, outer)) = chain.split_last() else {
        return Err(Error::Format("empty composition".into()));
    };
    let mut name = eval_name(inner.clone(), f, schedule.clone())?;
    for sys in outer.iter().rev() {
        name = eval_name(sys.clone(), name, schedule.clone())?;
    }
    Ok(name)
}
