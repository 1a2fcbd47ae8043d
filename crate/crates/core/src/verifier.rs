//! Sampling checks of the soundness and productivity conditions against
//! reference implementations of the approximated function.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::builtin::Polynomial;
use crate::error::{Error, Result};
use crate::numerics::{Point, Rat};
use crate::system::{membership, ApproxSystem, Budget, Membership, Quadruple};

/// A reference implementation of `theta` on its domain.
pub trait RefOracle: Send + Sync {
    fn dim(&self) -> usize;

    /// A value within `eps` of `theta(xi)`; deterministic in `(xi, eps)`.
    fn eval(&self, xi: &Point, eps: &Rat) -> Rat;

    fn in_domain(&self, xi: &Point) -> bool;

    /// Whether `eval` ignores `eps` and returns `theta(xi)` itself.
    fn is_exact(&self) -> bool;
}

/// `xi1 / xi2` on `xi2 != 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DivisionOracle;

impl RefOracle for DivisionOracle {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, xi: &Point, _eps: &Rat) -> Rat {
        xi.coord(0).checked_div(xi.coord(1)).expect("outside domain")
    }

    fn in_domain(&self, xi: &Point) -> bool {
        xi.dim() == 2 && !xi.coord(1).is_zero()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Taylor partial sums of `cos`, stopped once the alternating tail is
/// below the requested error.
#[derive(Clone, Copy, Debug, Default)]
pub struct CosineOracle;

impl RefOracle for CosineOracle {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, xi: &Point, eps: &Rat) -> Rat {
        let eps = if eps.is_zero() {
            Rat::new(1, 10i64.pow(18)).expect("nonzero")
        } else {
            eps.clone()
        };
        cos_taylor(xi.coord(0), &eps)
    }

    fn in_domain(&self, xi: &Point) -> bool {
        xi.dim() == 1
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Taylor sum of `cos x` within `eps`: terms `x^(2i)/(2i)!` are kept as
/// unreduced fractions and floored to multiples of `2^-p`, so the result is
/// off by at most one unit per term plus the alternating tail.
fn cos_taylor(x: &Rat, eps: &Rat) -> Rat {
    let half_eps = eps.div_int(2).expect("nonzero");
    // Unit 2^-p with 2^32 units below eps/2.
    let p = half_eps.denom().bits() + 33;
    let one = BigInt::from(1);
    let (x_num_sq, x_den_sq) = (x.numer() * x.numer(), x.denom() * x.denom());
    let mut num = one.clone();
    let mut den = one.clone();
    let mut sum = BigInt::from(0);
    let mut i: u64 = 0;
    loop {
        let bound = BigInt::from((2 * i + 1) * (2 * i + 2));
        // Terms shrink from here on, so the tail is below the current term.
        let decreasing = x_num_sq <= &bound * &x_den_sq;
        if decreasing && &num * half_eps.denom() <= half_eps.numer() * &den {
            return Rat::new(sum, one << p).expect("nonzero");
        }
        let scaled = (&num << p) / &den;
        if i.is_multiple_of(2) {
            sum += scaled;
        } else {
            sum -= scaled;
        }
        num *= &x_num_sq;
        den *= &x_den_sq * bound;
        i += 1;
        assert!(i < 1 << 32, "term count exceeds the rounding allowance");
    }
}

/// Exact evaluation of a polynomial with rational arguments.
#[derive(Clone, Debug)]
pub struct PolynomialOracle {
    theta: Polynomial,
}

impl PolynomialOracle {
    pub fn new(theta: Polynomial) -> Self {
        PolynomialOracle { theta }
    }
}

impl RefOracle for PolynomialOracle {
    fn dim(&self) -> usize {
        self.theta.nvars()
    }

    fn eval(&self, xi: &Point, _eps: &Rat) -> Rat {
        self.theta.eval(xi.coords()).expect("arity checked")
    }

    fn in_domain(&self, xi: &Point) -> bool {
        xi.dim() == self.dim()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// The reference oracle for a built-in system name.
pub fn builtin_oracle(name: &str) -> Option<Box<dyn RefOracle>> {
    match name {
        "division" | "max-division" | "maximal-division" => Some(Box::new(DivisionOracle)),
        "cosine" => Some(Box::new(CosineOracle)),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    CounterExample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub quadruple: Quadruple,
    pub xi: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub seed: u64,
    /// Number of checks performed.
    pub samples: u64,
    pub diagnostics: String,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

const MARGIN_REFINEMENTS: usize = 3;

/// How `b` relates to `theta(xi)` at precision `1/(n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Holds,
    Violated,
    Straddles,
}

fn check_output(oracle: &dyn RefOracle, q: &Quadruple, xi: &Point) -> Check {
    let bound = q.output_radius();
    if oracle.is_exact() {
        let d = (&q.b - &oracle.eval(xi, &Rat::zero())).abs();
        return if d < bound { Check::Holds } else { Check::Violated };
    }
    let n1 = q.n.saturating_add(1);
    let mut eps = Rat::reciprocal_succ(n1.saturating_mul(n1).saturating_mul(10) - 1);
    // Straddling results are retried with a tighter oracle before giving up.
    for _ in 0..=MARGIN_REFINEMENTS {
        let d = (&q.b - &oracle.eval(xi, &eps)).abs();
        if d < &bound - &eps {
            return Check::Holds;
        }
        if d >= &bound + &eps {
            return Check::Violated;
        }
        eps = eps.div_int(1 << 32).expect("nonzero");
    }
    Check::Straddles
}

/// Whether the witness still shows `|b - theta(xi)| >= 1/(n+1)` with
/// `dist(a, xi) < 1/(m+1)`.
pub fn replay(oracle: &dyn RefOracle, witness: &Witness) -> Result<bool> {
    let q = &witness.quadruple;
    Ok(oracle.in_domain(&witness.xi)
        && q.covers(&witness.xi)?
        && check_output(oracle, q, &witness.xi) == Check::Violated)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rat {
    // Uniform on the dyadics of denominator 2^20 in (-1, 1).
    let k: i64 = rng.random_range(-(1 << 20) + 1..1 << 20);
    Rat::new(k, 1 << 20).expect("nonzero")
}

/// Points at distance below `r` from `a`: `a` itself, corners at distance
/// `r - r^2` and `r (1 - 2^-t)`, points with one near-boundary coordinate,
/// and uniform interior points.
fn sample_near(rng: &mut ChaCha8Rng, a: &Point, r: &Rat, count: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    let signed = |rng: &mut ChaCha8Rng, v: &Rat| if rng.random::<bool>() { v.clone() } else { -v };
    for i in 0..count {
        let coords: Vec<Rat> = match i {
            0 => a.coords().to_vec(),
            1 => {
                let off = r - &(r * r);
                a.coords().iter().map(|c| c + &signed(rng, &off)).collect()
            }
            _ => match rng.random_range(0..3) {
                0 => {
                    let t: u32 = rng.random_range(1..48);
                    let off = r - &r.div_int(1 << t).expect("nonzero");
                    a.coords().iter().map(|c| c + &signed(rng, &off)).collect()
                }
                1 => {
                    let t: u32 = rng.random_range(1..48);
                    let off = r - &r.div_int(1 << t).expect("nonzero");
                    let axis = rng.random_range(0..a.dim());
                    a.coords()
                        .iter()
                        .enumerate()
                        .map(|(k, c)| {
                            if k == axis {
                                c + &signed(rng, &off)
                            } else {
                                c + &(r * &random_unit(rng))
                            }
                        })
                        .collect()
                }
                _ => a.coords().iter().map(|c| c + &(r * &random_unit(rng))).collect(),
            },
        };
        out.push(Point::new(coords));
    }
    out
}

/// A random enumeration index, log-uniform up to `2^28`.
fn random_index(rng: &mut ChaCha8Rng) -> u64 {
    let bits = rng.random_range(4..=28);
    rng.random_range(0..1u64 << bits)
}

const DRAWS_PER_QUAD: u64 = 1000;

/// Samples enumerated quadruples and points of their input balls, looking
/// for a violation of `|b - theta(xi)| < 1/(n+1)`.
pub fn verify_condition1(
    sys: &dyn ApproxSystem,
    oracle: &dyn RefOracle,
    quad_samples: u64,
    xi_samples: u64,
    seed: u64,
) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quads = 0;
    let mut checks = 0;
    let mut straddles = 0;
    let mut draws = 0;
    while quads < quad_samples && draws < quad_samples.saturating_mul(DRAWS_PER_QUAD) {
        draws += 1;
        let Some(q) = sys.enumerate(random_index(&mut rng)) else {
            continue;
        };
        quads += 1;
        for xi in sample_near(&mut rng, &q.a, &q.input_radius(), xi_samples as usize) {
            if !oracle.in_domain(&xi) {
                continue;
            }
            checks += 1;
            match check_output(oracle, &q, &xi) {
                Check::Holds => {}
                Check::Straddles => straddles += 1,
                Check::Violated => {
                    return Verdict {
                        outcome: Outcome::CounterExample,
                        diagnostics: format!("violation after {quads} quadruples"),
                        witness: Some(Witness { quadruple: q, xi }),
                        seed,
                        samples: checks,
                    };
                }
            }
        }
    }
    let outcome = if straddles > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    Verdict {
        outcome,
        witness: None,
        seed,
        samples: checks,
        diagnostics: format!(
            "{quads} quadruples from {draws} draws, {checks} points, {straddles} within oracle margin"
        ),
    }
}

/// Looks for `m <= m_cap` such that every sampled `a` near `xi` has some
/// `(a, m, b, n)` in the system.
#[allow(clippy::too_many_arguments)]
pub fn verify_condition2(
    sys: &dyn ApproxSystem,
    oracle: &dyn RefOracle,
    xi: &Point,
    n: u64,
    m_cap: u64,
    a_samples: u64,
    budget: Budget,
    seed: u64,
) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verdict = |outcome, samples, diagnostics| Verdict {
        outcome,
        witness: None,
        seed,
        samples,
        diagnostics,
    };
    if xi.dim() != sys.dim() || !oracle.in_domain(xi) {
        return verdict(Outcome::Inconclusive, 0, "point outside the oracle domain".into());
    }
    let n1 = n.saturating_add(1);
    let target = oracle.eval(xi, &Rat::reciprocal_succ(n1.saturating_mul(4) - 1));
    let scan = budget.steps().min(4096);
    let mut checks = 0;
    for m in 0..=m_cap {
        let points = sample_near(&mut rng, xi, &Rat::reciprocal_succ(m), a_samples.max(1) as usize);
        let all_covered = points.iter().all(|a| {
            checks += 1;
            let mut candidates = sys.suggest(a, m, n);
            candidates.push(target.clone());
            candidates.extend((0..scan).map(|j| crate::numerics::decode_rat(&j.into())));
            candidates.into_iter().any(|b| {
                let q = Quadruple::new(a.clone(), m, b, n);
                matches!(membership(sys, &q, budget), Ok(Membership::Yes))
            })
        });
        if all_covered {
            return verdict(Outcome::Pass, checks, format!("m = {m} covers every sampled point"));
        }
    }
    verdict(
        Outcome::Inconclusive,
        checks,
        format!("no m <= {m_cap} covered all sampled points"),
    )
}

/// Scans a grid of `grid` points per axis inside the open input ball of `q`;
/// false iff some grid point in the domain violates the output bound.
pub fn brute_force_condition1_check(q: &Quadruple, oracle: &dyn RefOracle, grid: u64) -> bool {
    brute_force_witness(q, oracle, grid).is_none()
}

/// The first grid point violating the output bound, if any.
pub fn brute_force_witness(q: &Quadruple, oracle: &dyn RefOracle, grid: u64) -> Option<Point> {
    let grid = grid.max(1);
    let r = q.input_radius();
    let offsets: Vec<Rat> = (0..grid)
        .map(|t| &r * &(Rat::new((2 * t + 1) as i64, grid as i64).expect("nonzero") - Rat::one()))
        .collect();
    let dim = q.a.dim();
    let mut idx = vec![0usize; dim];
    loop {
        let xi = Point::new(
            q.a.coords()
                .iter()
                .zip(&idx)
                .map(|(c, &t)| c + &offsets[t])
                .collect(),
        );
        if oracle.in_domain(&xi) && check_output(oracle, q, &xi) == Check::Violated {
            return Some(xi);
        }
        let mut axis = 0;
        loop {
            if axis == dim {
                return None;
            }
            idx[axis] += 1;
            if idx[axis] < grid as usize {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// Checks that the first `count` quadruples enumerated by `sub` are members
/// of `sup`. A maximal system contains every approximation system of the
/// same function, so a miss shows `sup` is not maximal.
pub fn verify_containment(
    sub: &dyn ApproxSystem,
    sup: &dyn ApproxSystem,
    count: u64,
    budget: Budget,
) -> Verdict {
    let mut found = 0;
    let mut k = 0;
    while found < count && k < count.saturating_mul(DRAWS_PER_QUAD) {
        if let Some(q) = sub.enumerate(k) {
            found += 1;
            if !matches!(membership(sup, &q, budget), Ok(Membership::Yes)) {
                let xi = q.a.clone();
                return Verdict {
                    outcome: Outcome::CounterExample,
                    diagnostics: format!("enumeration index {k} is missing from the larger system"),
                    witness: Some(Witness { quadruple: q, xi }),
                    seed: 0,
                    samples: found,
                };
            }
        }
        k += 1;
    }
    Verdict {
        outcome: Outcome::Pass,
        witness: None,
        seed: 0,
        samples: found,
        diagnostics: format!("{found} quadruples contained"),
    }
}

/// A value of `theta` within `eps` at a point in the oracle's domain.
pub fn oracle_value(oracle: &dyn RefOracle, xi: &Point, eps: &Rat) -> Result<Rat> {
    Error::check_dim(oracle.dim(), xi.dim())?;
    if !oracle.in_domain(xi) {
        return Err(Error::DivisionByZero);
    }
    Ok(oracle.eval(xi, eps))
}
