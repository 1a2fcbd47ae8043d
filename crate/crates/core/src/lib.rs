//! Exact rational approximation systems: representation, evaluation and
//! soundness checking of computable real functions.
//!
//! An approximation system for `theta: D -> R` is a set of quadruples
//! `(a, m, b, n)` promising `|b - theta(xi)| < 1/(n+1)` whenever
//! `dist(a, xi) < 1/(m+1)`. Evaluation searches such a set along a name
//! (a stream of rational approximations) of the argument.

pub mod builtin;
pub mod error;
pub mod evaluator;
pub mod names;
pub mod numerics;
pub mod operator;
pub mod system;
pub mod verifier;

pub use error::{Error, Result};
pub use evaluator::{apply, compose, eval_name, EvalResult};
pub use names::{name_of_point, CauchyName, OrdinaryName};
pub use numerics::{Point, Rat};
pub use operator::{system_from_operator, EvaluatorOperator, NameOperator, OperatorOutcome};
pub use system::{ApproxSystem, Budget, Membership, Quadruple, SharedSystem};
pub use verifier::{Outcome, RefOracle, Verdict};
