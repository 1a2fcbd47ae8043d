//! Ordinary and Cauchy names of points, and conversions between them.
//!
//! An ordinary name of `xi` is a stream `f` with `dist(f(i), xi) < 1/(i+1)`;
//! a Cauchy name satisfies `dist(f(i), f(k)) <= 2^-i` for `i < k`. Both are
//! memoized: each index is computed at most once per handle, and concurrent
//! readers always observe the first stored value.
//!
//! Indices are `u64`. Names that can answer any index, such as constant and
//! truncation names, also accept indices beyond that range through
//! `approx_wide`; conversions rely on this for their fast-growing schedules.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::numerics::{dist, Point, Rat};

type Approximator = dyn Fn(u64) -> Result<Point> + Send + Sync;
type WideApproximator = dyn Fn(&BigUint) -> Result<Point> + Send + Sync;

struct Stream {
    dim: usize,
    approx: Box<Approximator>,
    wide: Option<Arc<WideApproximator>>,
    memo: Mutex<HashMap<u64, Point>>,
}

impl Stream {
    fn new(dim: usize, approx: Box<Approximator>) -> Arc<Self> {
        Arc::new(Stream {
            dim,
            approx,
            wide: None,
            memo: Mutex::new(HashMap::new()),
        })
    }

    fn new_wide(dim: usize, wide: Arc<WideApproximator>) -> Arc<Self> {
        let narrow = wide.clone();
        Arc::new(Stream {
            dim,
            approx: Box::new(move |i| narrow(&BigUint::from(i))),
            wide: Some(wide),
            memo: Mutex::new(HashMap::new()),
        })
    }

    fn get_wide(&self, i: &BigUint) -> Result<Point> {
        if let Some(small) = i.to_u64() {
            return self.get(small);
        }
        let wide = self.wide.as_ref().ok_or_else(|| Error::IndexRange {
            index: i.to_string(),
        })?;
        let p = wide(i)?;
        Error::check_dim(self.dim, p.dim())?;
        Ok(p)
    }

    fn get(&self, i: u64) -> Result<Point> {
        if let Some(p) = self.memo.lock().get(&i) {
            return Ok(p.clone());
        }
        // Computed outside the lock: approximators may force other names.
        let p = (self.approx)(i)?;
        Error::check_dim(self.dim, p.dim())?;
        Ok(self.memo.lock().entry(i).or_insert(p).clone())
    }
}

/// A stream `i -> f(i)` with `dist(f(i), xi) < 1/(i+1)` for the named `xi`.
#[derive(Clone)]
pub struct OrdinaryName(Arc<Stream>);

/// A stream `i -> f(i)` with `dist(f(i), f(k)) <= 2^-i` whenever `i < k`.
#[derive(Clone)]
pub struct CauchyName(Arc<Stream>);

impl OrdinaryName {
    pub fn new<F>(dim: usize, approx: F) -> Self
    where
        F: Fn(u64) -> Result<Point> + Send + Sync + 'static,
    {
        OrdinaryName(Stream::new(dim, Box::new(approx)))
    }

    /// A name defined at every natural index, including those past `u64`.
    pub fn new_wide<F>(dim: usize, approx: F) -> Self
    where
        F: Fn(&BigUint) -> Result<Point> + Send + Sync + 'static,
    {
        OrdinaryName(Stream::new_wide(dim, Arc::new(approx)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn approx(&self, i: u64) -> Result<Point> {
        self.0.get(i)
    }

    /// `approx` at an arbitrary index; [`Error::IndexRange`] past `u64` for
    /// names built with [`OrdinaryName::new`].
    pub fn approx_wide(&self, i: &BigUint) -> Result<Point> {
        self.0.get_wide(i)
    }
}

impl CauchyName {
    pub fn new<F>(dim: usize, approx: F) -> Self
    where
        F: Fn(u64) -> Result<Point> + Send + Sync + 'static,
    {
        CauchyName(Stream::new(dim, Box::new(approx)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn approx(&self, i: u64) -> Result<Point> {
        self.0.get(i)
    }
}

impl fmt::Debug for OrdinaryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrdinaryName").field("dim", &self.dim()).finish()
    }
}

impl fmt::Debug for CauchyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyName").field("dim", &self.dim()).finish()
    }
}

/// The constant stream at `p`.
pub fn name_of_point(p: Point) -> OrdinaryName {
    let dim = p.dim();
    OrdinaryName::new_wide(dim, move |_| Ok(p.clone()))
}

// Keeps `2^(i+1)` to a modest allocation.
const MAX_CAUCHY_INDEX: u64 = 1 << 20;

/// `result(i) = f(2^(i+1))`.
///
/// From index 63 on the source index exceeds `u64`, which only names built
/// with [`OrdinaryName::new_wide`] support; others fail with
/// [`Error::IndexRange`].
pub fn ordinary_to_cauchy(f: &OrdinaryName) -> CauchyName {
    let source = f.clone();
    CauchyName::new(f.dim(), move |i| {
        if i > MAX_CAUCHY_INDEX {
            return Err(Error::IndexRange {
                index: format!("2^{}", i + 1),
            });
        }
        source.approx_wide(&(BigUint::from(1u8) << (i + 1)))
    })
}

/// Smallest `i` with `2^-i + 2^-(i+1) < 1/(n+1)`, i.e. `3(n+1) < 2^(i+1)`.
pub fn cauchy_index_for(n: u64) -> u64 {
    let bound = 3 * (n as u128 + 1);
    let mut i = 0u64;
    while (1u128 << (i + 1)) <= bound {
        i += 1;
    }
    i
}

/// [`cauchy_index_for`] at an arbitrary index: one less than the bit length
/// of `3(n+1)`.
fn cauchy_index_for_wide(n: &BigUint) -> u64 {
    ((n + 1u8) * 3u8).bits() - 1
}

/// `result(n) = h(i(n))` with `i(n)` from [`cauchy_index_for`].
pub fn cauchy_to_ordinary(h: &CauchyName) -> OrdinaryName {
    let source = h.clone();
    OrdinaryName::new_wide(h.dim(), move |n| source.approx(cauchy_index_for_wide(n)))
}

/// First pair `i < k <= upto` (lexicographic) with
/// `dist(f(i), f(k)) >= 1/(i+1) + 1/(k+1)`, a necessary condition for `f`
/// to name any point.
pub fn check_name_consistency(f: &OrdinaryName, upto: u64) -> Result<Option<(u64, u64)>> {
    let values = (0..=upto).map(|i| f.approx(i)).collect::<Result<Vec<_>>>()?;
    for i in 0..=upto {
        for k in i + 1..=upto {
            let d = dist(&values[i as usize], &values[k as usize])?;
            if d >= Rat::reciprocal_succ(i) + Rat::reciprocal_succ(k) {
                return Ok(Some((i, k)));
            }
        }
    }
    Ok(None)
}

/// First pair `i < k <= upto` with `dist(h(i), h(k)) > 2^-i`.
pub fn check_cauchy_consistency(h: &CauchyName, upto: u64) -> Result<Option<(u64, u64)>> {
    let values = (0..=upto).map(|i| h.approx(i)).collect::<Result<Vec<_>>>()?;
    for i in 0..=upto {
        let bound = Rat::new(1, BigInt::from(2).pow(i as u32))?;
        for k in i + 1..=upto {
            if dist(&values[i as usize], &values[k as usize])? > bound {
                return Ok(Some((i, k)));
            }
        }
    }
    Ok(None)
}

// Past this index truncation uses `bits(i) + 2` binary digits, which still
// keeps the error below `1/(i+1)`.
const TRUNCATION_LINEAR_UP_TO: u64 = 4000;

/// The ordinary name of a rational point whose `i`-th entry truncates each
/// coordinate to a multiple of `2^-(i+2)` (error below `1/(i+1)`).
pub fn truncation_name(p: Point) -> OrdinaryName {
    let dim = p.dim();
    OrdinaryName::new_wide(dim, move |i| {
        let digits = match i.to_u64() {
            Some(small) if small <= TRUNCATION_LINEAR_UP_TO => small + 2,
            _ => i.bits() + 2,
        };
        let scale = BigInt::from(2).pow(digits as u32);
        let coords = p
            .coords()
            .iter()
            .map(|c| {
                let scaled = c.numer() * &scale;
                let floor = num_integer::Integer::div_floor(&scaled, c.denom());
                Rat::new(floor, scale.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::new(coords))
    })
}
