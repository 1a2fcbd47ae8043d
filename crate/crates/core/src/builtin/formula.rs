//! Quantifier-free polynomial formulas over `a1..aN, b, u, v`, where `u`
//! stands for `1/(m+1)` and `v` for `1/(n+1)`.
//!
//! File format:
//!
//! ```json
//! {"vars": 1,
//!  "formula": {"and": [{"op": ">=", "poly": [[1, [0, 1, 0, 1]], [-1, [2, 0, 0, 0]]]}]},
//!  "theta": [[1, [2]]]}
//! ```
//!
//! `poly` is a list of `[coefficient, exponents]` monomials; coefficients
//! are JSON integers or decimal strings. `theta` is optional: a polynomial
//! in `a1..aN` giving the function exactly, used as a verification oracle.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::Rat;

/// Integer polynomial stored as monomials with exponent vectors of a fixed
/// length. Terms are kept merged and free of zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(BigInt, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<(BigInt, Vec<u32>)>) -> Result<Self> {
        for (_, exps) in &terms {
            if exps.len() != nvars {
                return Err(Error::Format(format!(
                    "exponent vector of length {} where {nvars} variables are expected",
                    exps.len()
                )));
            }
        }
        Ok(Polynomial::normalized(nvars, terms))
    }

    fn normalized(nvars: usize, terms: Vec<(BigInt, Vec<u32>)>) -> Self {
        let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (c, e) in terms {
            *merged.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        Polynomial { nvars, terms }
    }

    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Polynomial::normalized(nvars, vec![(c.into(), vec![0; nvars])])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Polynomial {
            nvars,
            terms: vec![(BigInt::one(), exps)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(BigInt, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Polynomial::constant(self.nvars, 1), |acc, _| &acc * self)
    }

    /// Maximal exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut degs = vec![0; self.nvars];
        for (_, e) in &self.terms {
            for (d, x) in degs.iter_mut().zip(e) {
                *d = (*d).max(*x);
            }
        }
        degs
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        Error::check_dim(self.nvars, point.len())?;
        let mut powers = PowerCache::new(point);
        Ok(self.eval_cached(&mut powers))
    }

    pub(crate) fn eval_cached(&self, powers: &mut PowerCache<'_>) -> Rat {
        let mut acc = Rat::zero();
        for (c, exps) in &self.terms {
            let mut term = Rat::from_int(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term * powers.get(i, e);
                }
            }
            acc = acc + term;
        }
        acc
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(c, e)| json!([coef_to_json(c), e]))
                .collect(),
        )
    }

    fn from_json(value: &Value, nvars: usize) -> Result<Self> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Format("polynomial must be a list of monomials".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Format("monomial must be [coefficient, exponents]".into()))?;
            let coef = coef_from_json(&pair[0])?;
            let exps = pair[1]
                .as_array()
                .ok_or_else(|| Error::Format("exponents must be a list".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|e| u32::try_from(e).ok())
                        .ok_or_else(|| Error::Format(format!("bad exponent {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            terms.push((coef, exps));
        }
        Polynomial::new(nvars, terms)
    }
}

fn coef_to_json(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(small) => json!(small),
        Err(_) => json!(c.to_string()),
    }
}

fn coef_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(u) = v.as_u64() {
        return Ok(BigInt::from(u));
    }
    if let Some(s) = v.as_str() {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) {
            if let Some(c) = BigInt::parse_bytes(s.as_bytes(), 10) {
                return Ok(c);
            }
        }
    }
    Err(Error::Format(format!("coefficient {v} is not an integer")))
}

/// Lazily computed powers of the evaluation point's coordinates.
pub(crate) struct PowerCache<'a> {
    point: &'a [Rat],
    powers: Vec<Vec<Rat>>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(point: &'a [Rat]) -> Self {
        PowerCache {
            point,
            powers: vec![Vec::new(); point.len()],
        }
    }

    pub(crate) fn get(&mut self, var: usize, exp: u32) -> &Rat {
        let row = &mut self.powers[var];
        if row.is_empty() {
            row.push(self.point[var].clone());
        }
        while row.len() < exp as usize {
            let next = row.last().expect("non-empty") * &self.point[var];
            row.push(next);
        }
        &row[exp as usize - 1]
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let terms = self.terms.iter().chain(&rhs.terms).cloned().collect();
        Polynomial::normalized(self.nvars, terms)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c1, e1) in &self.terms {
            for (c2, e2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                terms.push((c1 * c2, e));
            }
        }
        Polynomial::normalized(self.nvars, terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `P > 0`
    Gt,
    /// `P >= 0`
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom(Polynomial, Comparison),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn gt(p: Polynomial) -> Self {
        Formula::Atom(p, Comparison::Gt)
    }

    pub fn ge(p: Polynomial) -> Self {
        Formula::Atom(p, Comparison::Ge)
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn atoms(&self) -> Vec<&Polynomial> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Polynomial>) {
        match self {
            Formula::Atom(p, _) => out.push(p),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Not(f) => f.collect_atoms(out),
        }
    }

    pub(crate) fn eval_cached(&self, powers: &mut PowerCache<'_>) -> bool {
        match self {
            Formula::Atom(p, cmp) => {
                let s = p.eval_cached(powers).signum();
                match cmp {
                    Comparison::Gt => s > 0,
                    Comparison::Ge => s >= 0,
                }
            }
            Formula::And(fs) => fs.iter().all(|f| f.eval_cached(powers)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_cached(powers)),
            Formula::Not(f) => !f.eval_cached(powers),
        }
    }

    fn check_vars(&self, nvars: usize) -> Result<()> {
        for p in self.atoms() {
            if p.nvars() != nvars {
                return Err(Error::Format(format!(
                    "atom over {} variables in a formula over {nvars}",
                    p.nvars()
                )));
            }
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        match self {
            Formula::Atom(p, cmp) => {
                let op = match cmp {
                    Comparison::Gt => ">",
                    Comparison::Ge => ">=",
                };
                json!({"op": op, "poly": p.to_json()})
            }
            Formula::And(fs) => json!({"and": fs.iter().map(Formula::to_json).collect::<Vec<_>>()}),
            Formula::Or(fs) => json!({"or": fs.iter().map(Formula::to_json).collect::<Vec<_>>()}),
            Formula::Not(f) => json!({"not": [f.to_json()]}),
        }
    }

    fn from_json(value: &Value, nvars: usize) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Format("formula node must be an object".into()))?;
        if let Some(op) = obj.get("op") {
            let cmp = match op.as_str() {
                Some(">") => Comparison::Gt,
                Some(">=") => Comparison::Ge,
                _ => return Err(Error::Format(format!("unknown comparison {op}"))),
            };
            let poly = obj
                .get("poly")
                .ok_or_else(|| Error::Format("atom without poly".into()))?;
            return Ok(Formula::Atom(Polynomial::from_json(poly, nvars)?, cmp));
        }
        if obj.len() != 1 {
            return Err(Error::Format(
                "node must have exactly one of and/or/not".into(),
            ));
        }
        let (key, body) = obj.iter().next().expect("one entry");
        let children = |body: &Value| -> Result<Vec<Formula>> {
            body.as_array()
                .ok_or_else(|| Error::Format(format!("{key} expects a list")))?
                .iter()
                .map(|c| Formula::from_json(c, nvars))
                .collect()
        };
        match key.as_str() {
            "and" => Ok(Formula::And(children(body)?)),
            "or" => Ok(Formula::Or(children(body)?)),
            "not" => {
                if body.is_object() {
                    return Ok(Formula::negate(Formula::from_json(body, nvars)?));
                }
                let mut inner = children(body)?;
                if inner.len() != 1 {
                    return Err(Error::Format("not expects exactly one operand".into()));
                }
                Ok(Formula::negate(inner.remove(0)))
            }
            other => Err(Error::Format(format!("unknown node {other:?}"))),
        }
    }
}

/// A formula over `N + 3` variables `(a1..aN, b, u, v)`, optionally
/// carrying the exact polynomial `theta(a1..aN)` it describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFormula {
    dim: usize,
    formula: Formula,
    theta: Option<Polynomial>,
}

impl PolyFormula {
    pub fn new(dim: usize, formula: Formula) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Format("dimension must be at least 1".into()));
        }
        formula.check_vars(dim + 3)?;
        Ok(PolyFormula {
            dim,
            formula,
            theta: None,
        })
    }

    pub fn with_theta(mut self, theta: Polynomial) -> Result<Self> {
        if theta.nvars() != self.dim {
            return Err(Error::Format(format!(
                "theta must be a polynomial in {} variables",
                self.dim
            )));
        }
        self.theta = Some(theta);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.dim + 3
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn theta(&self) -> Option<&Polynomial> {
        self.theta.as_ref()
    }

    /// Index of `b`; `u` and `v` follow it.
    pub fn b_index(&self) -> usize {
        self.dim
    }

    /// Truth value at `(a1..aN, b, u, v)`.
    pub fn eval(&self, vars: &[Rat]) -> Result<bool> {
        Error::check_dim(self.nvars(), vars.len())?;
        let mut powers = PowerCache::new(vars);
        Ok(self.formula.eval_cached(&mut powers))
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({"vars": self.dim, "formula": self.formula.to_json()});
        if let Some(theta) = &self.theta {
            doc["theta"] = theta.to_json();
        }
        doc
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialize")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dim = value
            .get("vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Format("missing integer field \"vars\"".into()))?
            as usize;
        let formula = value
            .get("formula")
            .ok_or_else(|| Error::Format("missing field \"formula\"".into()))?;
        let pf = PolyFormula::new(dim, Formula::from_json(formula, dim + 3)?)?;
        match value.get("theta") {
            Some(t) => pf.with_theta(Polynomial::from_json(t, dim)?),
            None => Ok(pf),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("invalid JSON: {e}")))?;
        PolyFormula::from_json(&value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_and_eval() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &x) - &(&Polynomial::constant(2, 3) * &y);
        assert_eq!(p.eval(&[r("2"), r("1/3")]).unwrap(), r("3"));
        assert!((&p - &p).is_zero());
        assert_eq!((&x + &y).pow(2).terms().len(), 3);
        assert_eq!(p.degrees(), vec![2, 1]);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"vars": 1, "formula": {"and": [
            {"op": ">=", "poly": [[1, [0, 1, 0, 1]], [-1, [2, 0, 0, 0]]]},
            {"not": [{"op": ">", "poly": [["-123456789012345678901234567890", [0, 0, 1, 0]]]}]},
            {"or": []}
        ]}, "theta": [[1, [2]]]}"#;
        let pf = PolyFormula::from_json_str(text).unwrap();
        let again = PolyFormula::from_json(&pf.to_json()).unwrap();
        assert_eq!(pf, again);
        assert!(pf.theta().is_some());
    }

    #[test]
    fn malformed_formulas_rejected() {
        let bad = [
            r#"{"formula": {"and": []}}"#,
            r#"{"vars": 1}"#,
            r#"{"vars": 1, "formula": {"op": "<", "poly": []}}"#,
            r#"{"vars": 1, "formula": {"op": ">", "poly": [[1, [0, 1]]]}}"#,
            r#"{"vars": 1, "formula": {"op": ">", "poly": [[1.5, [0, 0, 0, 0]]]}}"#,
            r#"{"vars": 1, "formula": {"xor": []}}"#,
            r#"{"vars": 1, "formula": {"not": []}}"#,
            r#"{"vars": 0, "formula": {"and": []}}"#,
            r#"{"vars": 1, "formula": {"and": []}, "theta": [[1, [1, 1]]]}"#,
            "not json",
        ];
        for text in bad {
            assert!(
                matches!(PolyFormula::from_json_str(text), Err(Error::Format(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn formula_semantics() {
        // 0 > 0 is the empty system.
        let empty = PolyFormula::new(1, Formula::gt(Polynomial::zero(4))).unwrap();
        assert!(!empty.eval(&[r("1"), r("2"), r("1/2"), r("1/3")]).unwrap());
        let ge0 = PolyFormula::new(1, Formula::ge(Polynomial::zero(4))).unwrap();
        assert!(ge0.eval(&[r("1"), r("2"), r("1/2"), r("1/3")]).unwrap());
        let neg = PolyFormula::new(1, Formula::negate(Formula::ge(Polynomial::zero(4)))).unwrap();
        assert!(!neg.eval(&[r("0"), r("0"), r("1"), r("1")]).unwrap());
        assert!(empty.eval(&[r("1")]).is_err());
    }
}
