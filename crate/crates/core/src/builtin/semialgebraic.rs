//! Systems defined by quantifier-free polynomial formulas.

use std::sync::Arc;

use crate::numerics::{Point, Rat};
use crate::system::{quadruple_at, ApproxSystem, Quadruple};

use super::formula::{Formula, PolyFormula, Polynomial, PowerCache};
use super::upoly::{RootLocation, UPoly};

/// `(a, m, b, n)` is a member iff the formula holds at
/// `(a1..aN, b, 1/(m+1), 1/(n+1))`.
#[derive(Clone, Debug)]
pub struct SemialgebraicSystem {
    formula: Arc<PolyFormula>,
}

pub fn semialgebraic_system(formula: PolyFormula) -> SemialgebraicSystem {
    SemialgebraicSystem {
        formula: Arc::new(formula),
    }
}

/// The maximal system for `xi -> xi^2` over variables `(a, b, u, v)`:
/// the image of the open ball `(a-u, a+u)` lies in `(b-v, b+v)`.
///
/// The upper constraints bound both endpoint squares by `b + v`. The lower
/// one needs `b - v` below the endpoint squares when the ball avoids zero,
/// and strictly below zero when it contains it.
pub fn squaring_formula() -> PolyFormula {
    let a = Polynomial::var(4, 0);
    let b = Polynomial::var(4, 1);
    let u = Polynomial::var(4, 2);
    let v = Polynomial::var(4, 3);
    let left = &a - &u;
    let right = &a + &u;
    let top = &b + &v;
    let bottom = &b - &v;
    let formula = Formula::And(vec![
        Formula::ge(&top - &(&right * &right)),
        Formula::ge(&top - &(&left * &left)),
        Formula::Or(vec![
            Formula::And(vec![
                Formula::ge(&(&left * &left) - &bottom),
                Formula::ge(&(&right * &right) - &bottom),
                Formula::Or(vec![Formula::ge(left.clone()), Formula::ge(-&right)]),
            ]),
            Formula::gt(-&bottom),
        ]),
    ]);
    PolyFormula::new(1, formula)
        .and_then(|f| f.with_theta(Polynomial::var(1, 0).pow(2)))
        .expect("well-formed")
}

impl SemialgebraicSystem {
    pub fn formula(&self) -> &PolyFormula {
        &self.formula
    }

    fn variables(&self, a: &Point, m: u64, b: Rat, n: u64) -> Vec<Rat> {
        let mut vars = a.coords().to_vec();
        vars.push(b);
        vars.push(Rat::reciprocal_succ(m));
        vars.push(Rat::reciprocal_succ(n));
        vars
    }

    fn holds(&self, a: &Point, m: u64, b: &Rat, n: u64) -> bool {
        let vars = self.variables(a, m, b.clone(), n);
        let mut powers = PowerCache::new(&vars);
        self.formula.formula().eval_cached(&mut powers)
    }

    /// Restricts every atom to a polynomial in `b` alone.
    fn atoms_in_b(&self, a: &Point, m: u64, n: u64) -> Vec<UPoly> {
        let b_index = self.formula.b_index();
        let vars = self.variables(a, m, Rat::one(), n);
        let mut powers = PowerCache::new(&vars);
        self.formula
            .formula()
            .atoms()
            .into_iter()
            .map(|p| {
                let degree = p.degrees()[b_index] as usize;
                let mut coeffs = vec![Rat::zero(); degree + 1];
                for (c, exps) in p.terms() {
                    let mut term = Rat::from_int(c.clone());
                    for (i, &e) in exps.iter().enumerate() {
                        if e > 0 && i != b_index {
                            term = term * powers.get(i, e);
                        }
                    }
                    let slot = &mut coeffs[exps[b_index] as usize];
                    *slot = &*slot + &term;
                }
                UPoly::new(coeffs)
            })
            .collect()
    }
}

impl ApproxSystem for SemialgebraicSystem {
    fn dim(&self) -> usize {
        self.formula.dim()
    }

    fn enumerate(&self, k: u64) -> Option<Quadruple> {
        let q = quadruple_at(k, self.dim());
        self.holds(&q.a, q.m, &q.b, q.n).then_some(q)
    }

    fn decide(&self, q: &Quadruple) -> Option<bool> {
        Some(q.a.dim() == self.dim() && self.holds(&q.a, q.m, &q.b, q.n))
    }

    /// Samples one point from every sign-invariant cell of the atoms viewed
    /// as polynomials in `b`: their rational roots, the gaps between roots
    /// and one point beyond each end, keeping the samples that satisfy the
    /// formula.
    fn suggest(&self, a: &Point, m: u64, n: u64) -> Vec<Rat> {
        if a.dim() != self.dim() {
            return Vec::new();
        }
        let width = Rat::reciprocal_succ(n)
            .div_int(16 * (n.saturating_add(1)))
            .expect("nonzero");
        let mut marks: Vec<Rat> = Vec::new();
        for p in self.atoms_in_b(a, m, n) {
            for root in p.isolate_roots(&width) {
                match root {
                    RootLocation::Exact(x) => marks.push(x),
                    RootLocation::Between(lo, hi) => {
                        marks.push(lo);
                        marks.push(hi);
                    }
                }
            }
        }
        marks.sort();
        marks.dedup();
        let mut samples = Vec::with_capacity(2 * marks.len() + 2);
        match (marks.first(), marks.last()) {
            (Some(first), Some(last)) => {
                samples.push(first - &Rat::one());
                for w in marks.windows(2) {
                    samples.push(w[0].midpoint(&w[1]));
                }
                samples.extend(marks.iter().cloned());
                samples.push(last + &Rat::one());
            }
            _ => samples.push(Rat::zero()),
        }
        samples.retain(|b| self.holds(a, m, b, n));
        samples
    }
}
