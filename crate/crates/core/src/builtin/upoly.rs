//! Univariate polynomials with rational coefficients and Sturm-sequence
//! real root isolation.

use crate::numerics::Rat;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rat {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_int(i as u64))
                .collect(),
        )
    }

    fn sub_scaled_shifted(&mut self, other: &UPoly, factor: &Rat, shift: usize) {
        for (i, c) in other.0.iter().enumerate() {
            self.0[i + shift] = &self.0[i + shift] - &(c * factor);
        }
        *self = UPoly::new(std::mem::take(&mut self.0));
    }

    /// `(quotient, remainder)` of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.lead().checked_div(divisor.lead()).expect("nonzero lead");
            quot[rd - dd] = factor.clone();
            rem.sub_scaled_shifted(divisor, &factor, rd - dd);
        }
        (UPoly::new(quot), rem)
    }

    fn monic(&self) -> UPoly {
        let lead = self.lead().clone();
        UPoly(self.0.iter().map(|c| c.checked_div(&lead).expect("nonzero")).collect())
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// `1 + max |c_i / c_d|`: every real root lies strictly inside.
    pub fn root_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let max = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs().checked_div(&lead).expect("nonzero"))
            .max()
            .unwrap_or_else(Rat::zero);
        max + Rat::one()
    }

    /// Real roots as points or isolating intervals of width at most `width`.
    /// Exact rational roots found along the way are reported as points.
    pub fn isolate_roots(&self, width: &Rat) -> Vec<RootLocation> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        if deg == 1 {
            let root = (-&self.0[0]).checked_div(&self.0[1]).expect("nonzero");
            return vec![RootLocation::Exact(root)];
        }
        let p = self.squarefree();
        let chain = SturmChain::new(&p);
        let bound = p.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-&bound, bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = chain.roots_in(&lo, &hi);
            if count == 0 {
                continue;
            }
            let mid = lo.midpoint(&hi);
            if count == 1 {
                out.push(refine(&p, &chain, lo, hi, width));
                continue;
            }
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.low().cmp(y.low()));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Exact(Rat),
    /// Exactly one root in the half-open interval `(lo, hi]`.
    Between(Rat, Rat),
}

impl RootLocation {
    pub fn low(&self) -> &Rat {
        match self {
            RootLocation::Exact(x) => x,
            RootLocation::Between(lo, _) => lo,
        }
    }
}

fn refine(p: &UPoly, chain: &SturmChain, mut lo: Rat, mut hi: Rat, width: &Rat) -> RootLocation {
    if p.eval(&hi).is_zero() {
        return RootLocation::Exact(hi);
    }
    while &hi - &lo > *width {
        let mid = lo.midpoint(&hi);
        if p.eval(&mid).is_zero() {
            return RootLocation::Exact(mid);
        }
        if chain.roots_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootLocation::Between(lo, hi)
}

struct SturmChain(Vec<UPoly>);

impl SturmChain {
    fn new(p: &UPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(UPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        SturmChain(chain)
    }

    fn sign_changes(&self, x: &Rat) -> usize {
        let signs: Vec<i32> = self
            .0
            .iter()
            .map(|q| q.eval(x).signum())
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(lo, hi]`.
    fn roots_in(&self, lo: &Rat, hi: &Rat) -> usize {
        self.sign_changes(lo).saturating_sub(self.sign_changes(hi))
    }
}
