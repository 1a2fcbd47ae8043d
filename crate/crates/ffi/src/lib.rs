//! C ABI for approxsys.
//!
//! Systems are opaque `ApxSystem` handles created by the `apx_system_*`
//! constructors and released with [`apx_system_free`]. Every fallible call
//! returns an [`ApxStatus`]; on failure [`apx_last_error_message`] describes
//! the error for the calling thread. Strings returned through `out`
//! parameters are JSON, owned by the caller, and released with
//! [`apx_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use approxsys::builtin::{builtin_by_name, semialgebraic_system, PolyFormula};
use approxsys::evaluator::{apply, default_budget_base, geometric_schedule};
use approxsys::system::membership;
use approxsys::verifier::{builtin_oracle, verify_condition1, PolynomialOracle, RefOracle};
use approxsys::{name_of_point, Budget, Error, Membership, Point, Quadruple, SharedSystem};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApxStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed text, unknown system name or invalid UTF-8.
    Parse = 2,
    Dimension = 3,
    /// The input lies outside the function's domain.
    Domain = 4,
    /// Malformed formula or quadruple JSON.
    Format = 5,
    /// The search budget ran out.
    Timeout = 6,
    /// Nothing at the requested index, or no reference oracle.
    NotFound = 7,
    /// An internal panic was caught at the boundary.
    Panic = 8,
}

/// An approximation system together with its reference oracle, if any.
pub struct ApxSystem {
    sys: SharedSystem,
    oracle: Option<Box<dyn RefOracle>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(ApxStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DivisionByZero => ApxStatus::Domain,
            Error::Dimension { .. } => ApxStatus::Dimension,
            Error::Parse { .. } => ApxStatus::Parse,
            Error::Format(_) | Error::IndexRange { .. } => ApxStatus::Format,
            Error::Timeout { .. } => ApxStatus::Timeout,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> ApxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ApxStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ApxStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ApxStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(sys: *const ApxSystem) -> FfiResult<&'a ApxSystem> {
    sys.as_ref().ok_or_else(|| null("system"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, json: String) -> FfiResult<()> {
    let s = CString::new(json).expect("JSON has no nul bytes");
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(s.into_raw());
    Ok(())
}

unsafe fn new_handle(out: *mut *mut ApxSystem, sys: ApxSystem) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(sys)));
    Ok(())
}

/// Creates a built-in system: `"division"`, `"max-division"` or `"cosine"`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_system_builtin(name: *const c_char, out: *mut *mut ApxSystem) -> ApxStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let sys = builtin_by_name(name)?;
        new_handle(out, ApxSystem { sys, oracle: builtin_oracle(name) })
    })
}

/// Creates a semialgebraic system from formula JSON. A `"theta"` field
/// supplies the reference oracle used by [`apx_verify_condition1`].
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_system_from_formula_json(json: *const c_char, out: *mut *mut ApxSystem) -> ApxStatus {
    guard(|| {
        let formula = PolyFormula::from_json_str(read_str(json, "json")?)?;
        let oracle = formula
            .theta()
            .map(|t| Box::new(PolynomialOracle::new(t.clone())) as Box<dyn RefOracle>);
        let sys = Arc::new(semialgebraic_system(formula));
        new_handle(out, ApxSystem { sys, oracle })
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sys` must come from an `apx_system_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn apx_system_free(sys: *mut ApxSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Input dimension of the system, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apx_system_dim(sys: *const ApxSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.sys.dim())
}

/// Evaluates at the comma-separated rational point to precision index `n`.
/// A `budget` of 0 uses the default schedule. Writes
/// `{"value", "precision_index", "search_steps"}` to `out_json`.
///
/// # Safety
/// `sys` must be a live handle, `point` a nul-terminated string and
/// `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_eval(
    sys: *const ApxSystem,
    point: *const c_char,
    n: u64,
    budget: u64,
    out_json: *mut *mut c_char,
) -> ApxStatus {
    guard(|| {
        let h = handle(sys)?;
        let point = Point::parse_list(read_str(point, "point")?)?;
        let budget = if budget == 0 {
            geometric_schedule(default_budget_base()?)(n)
        } else {
            Budget(budget)
        };
        let res = apply(&*h.sys, &name_of_point(point), n, budget)?;
        write_json(out_json, serde_json::to_string(&res).expect("serializable"))
    })
}

/// Writes the quadruple at enumeration index `k` as JSON, or returns
/// `NOT_FOUND` when the index holds no member.
///
/// # Safety
/// `sys` must be a live handle and `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_enumerate(sys: *const ApxSystem, k: u64, out_json: *mut *mut c_char) -> ApxStatus {
    guard(|| {
        let h = handle(sys)?;
        match h.sys.enumerate(k) {
            Some(q) => write_json(out_json, serde_json::to_string(&q).expect("serializable")),
            None => Err(Failure(ApxStatus::NotFound, format!("index {k} is not a member"))),
        }
    })
}

/// Membership of a quadruple given as JSON `{"a": [...], "m", "b", "n"}`.
/// Writes 1 when accepted within `budget` steps and 0 otherwise.
///
/// # Safety
/// `sys` must be a live handle, `quad_json` a nul-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_membership(
    sys: *const ApxSystem,
    quad_json: *const c_char,
    budget: u64,
    out: *mut i32,
) -> ApxStatus {
    guard(|| {
        let h = handle(sys)?;
        let q: Quadruple = serde_json::from_str(read_str(quad_json, "quadruple")?)
            .map_err(|e| Failure(ApxStatus::Format, format!("bad quadruple: {e}")))?;
        let m = membership(&*h.sys, &q, Budget(budget))?;
        write_out(out, (m == Membership::Yes) as i32)
    })
}

/// Samples the soundness condition and writes the verdict JSON. Fails with
/// `NOT_FOUND` when the system has no reference oracle.
///
/// # Safety
/// `sys` must be a live handle and `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn apx_verify_condition1(
    sys: *const ApxSystem,
    quads: u64,
    xi_per_quad: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> ApxStatus {
    guard(|| {
        let h = handle(sys)?;
        let oracle = h
            .oracle
            .as_deref()
            .ok_or_else(|| Failure(ApxStatus::NotFound, "system has no reference oracle".into()))?;
        let v = verify_condition1(&*h.sys, oracle, quads, xi_per_quad, seed);
        write_json(out_json, v.to_json())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn apx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or null. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn apx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
