//! Concrete approximation systems.

mod cosine;
mod division;
mod formula;
mod semialgebraic;
mod upoly;

pub use cosine::{cosine_decide, cosine_error_term, cosine_system, sigma_k, CosineSystem};
pub use division::{
    division_corners, division_decide, division_system, maximal_division_decide,
    maximal_division_system, DivisionSystem,
};
pub use formula::{Comparison, Formula, Polynomial, PolyFormula};
pub use semialgebraic::{semialgebraic_system, squaring_formula, SemialgebraicSystem};
pub use upoly::UPoly;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::SharedSystem;

/// Names accepted by [`builtin_by_name`].
pub const BUILTIN_NAMES: [&str; 3] = ["division", "max-division", "cosine"];

pub fn builtin_by_name(name: &str) -> Result<SharedSystem> {
    match name {
        "division" => Ok(Arc::new(division_system())),
        "max-division" | "maximal-division" => Ok(Arc::new(maximal_division_system())),
        "cosine" => Ok(Arc::new(cosine_system())),
        other => Err(Error::parse(other, "unknown system")),
    }
}
