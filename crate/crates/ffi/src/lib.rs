//! C ABI for chromalg: opaque handles, status codes and JSON strings.
//!
//! Every fallible function returns a [`ChromalgStatus`]; on failure the message is available from
//! [`chromalg_last_error`] on the same thread. Strings returned through out-parameters are owned by
//! the caller and released with [`chromalg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chromalg::cli::CliError;
use chromalg::fgl::GeneratorKind;
use chromalg::hopf::{self, HopfAlgebroid, HopfSpec};
use chromalg::landweber::{self, AlgebraOverBase};
use chromalg::numtheory;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromalgStatus {
    Ok = 0,
    /// A mathematical verification failed (not exact, not invariant, failed axioms, …).
    MathFailure = 1,
    /// Malformed or unsupported input.
    InvalidInput = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// An algebra R over BP_* with its classifying map.
pub struct ChromalgAlgebra {
    inner: AlgebraOverBase,
}

/// A Hopf algebroid (A, Γ).
pub struct ChromalgHopf {
    inner: HopfAlgebroid,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ChromalgStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = if e.exit == 1 { ChromalgStatus::MathFailure } else { ChromalgStatus::InvalidInput };
        Failure(status, e.message)
    }
}

macro_rules! lift {
    ($e:expr) => {
        $e.map_err(|e| Failure::from(CliError::from(e)))
    };
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ChromalgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ChromalgStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            ChromalgStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ChromalgStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(ChromalgStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ChromalgStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(ChromalgStatus::Internal, "output contains a nul byte".into()))?;
    put(out, c.into_raw())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(ChromalgStatus::NullPointer, "null handle".into()))
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn chromalg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn chromalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn chromalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an algebra.json document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_from_json(json: *const c_char, out: *mut *mut ChromalgAlgebra) -> ChromalgStatus {
    guard(|| {
        let inner = lift!(AlgebraOverBase::from_json(text(json)?))?;
        put(out, Box::into_raw(Box::new(ChromalgAlgebra { inner })))
    })
}

/// A built-in algebra such as "e1", "k2" or "bp" at the prime `p`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_builtin(name: *const c_char, p: u64, out: *mut *mut ChromalgAlgebra) -> ChromalgStatus {
    guard(|| {
        let inner = lift!(landweber::builtin(text(name)?, p))?;
        put(out, Box::into_raw(Box::new(ChromalgAlgebra { inner })))
    })
}

/// # Safety
/// `a` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_free(a: *mut ChromalgAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Writes 1 to `out` when φ(v_n), φ(v_{n+1}), … is regular up to degree `max_degree`, else 0.
/// The full verdict is written as JSON to `verdict_json` when that pointer is non-NULL.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_is_exact(
    a: *const ChromalgAlgebra,
    max_degree: c_int,
    out: *mut c_int,
    verdict_json: *mut *mut c_char,
) -> ChromalgStatus {
    guard(|| {
        let v = lift!(handle(a)?.inner.is_landweber_exact(max_degree))?;
        if !verdict_json.is_null() {
            put_string(verdict_json, to_json(&v))?;
        }
        put(out, c_int::from(v.exact))
    })
}

/// The height of the algebra as JSON.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_height(a: *const ChromalgAlgebra, bound: u32, out: *mut *mut c_char) -> ChromalgStatus {
    guard(|| {
        let h = lift!(handle(a)?.inner.algebra_height(bound))?;
        put_string(out, to_json(&h))
    })
}

/// The stratum label as JSON; fails with `MathFailure` when the algebra is not Landweber exact.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_algebra_classify(
    a: *const ChromalgAlgebra,
    bound: u32,
    max_degree: c_int,
    out: *mut *mut c_char,
) -> ChromalgStatus {
    guard(|| {
        let label = lift!(handle(a)?.inner.classify_stratum(bound, max_degree))?;
        put_string(out, to_json(&label))
    })
}

/// Compares the comodule categories of two algebras; the report is JSON.
///
/// # Safety
/// `left` and `right` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_compare(
    left: *const ChromalgAlgebra,
    right: *const ChromalgAlgebra,
    bound: u32,
    max_degree: c_int,
    out: *mut *mut c_char,
) -> ChromalgStatus {
    guard(|| {
        let r = lift!(landweber::change_of_rings_compare(&handle(left)?.inner, &handle(right)?.inner, bound, max_degree))?;
        put_string(out, to_json(&r))
    })
}

/// The BP Hopf algebroid at `p` through degree `max_degree`, with Hazewinkel generators.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_hopf_bp(p: u64, max_degree: c_int, out: *mut *mut ChromalgHopf) -> ChromalgStatus {
    guard(|| {
        let inner = lift!(hopf::bp(p, max_degree, GeneratorKind::Hazewinkel))?;
        put(out, Box::into_raw(Box::new(ChromalgHopf { inner })))
    })
}

/// Parses a hopf.json document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_hopf_from_json(json: *const c_char, out: *mut *mut ChromalgHopf) -> ChromalgStatus {
    guard(|| {
        let spec: HopfSpec = serde_json::from_str(text(json)?).map_err(|e| Failure(ChromalgStatus::InvalidInput, e.to_string()))?;
        let inner = lift!(spec.build())?;
        put(out, Box::into_raw(Box::new(ChromalgHopf { inner })))
    })
}

/// # Safety
/// `h` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn chromalg_hopf_free(h: *mut ChromalgHopf) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Serializes the Hopf algebroid as hopf.json.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_hopf_to_json(h: *const ChromalgHopf, out: *mut *mut c_char) -> ChromalgStatus {
    guard(|| put_string(out, to_json(&HopfSpec::from_hopf(&handle(h)?.inner))))
}

/// Checks the Hopf algebroid axioms; returns `MathFailure` when one fails. The report is JSON.
///
/// # Safety
/// `h` must be a live handle; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_hopf_check(h: *const ChromalgHopf, report: *mut *mut c_char) -> ChromalgStatus {
    guard(|| {
        let r = handle(h)?.inner.check_axioms();
        put_string(report, to_json(&r))?;
        if r.all_pass() {
            Ok(())
        } else {
            Err(Failure(ChromalgStatus::MathFailure, "Hopf algebroid axioms fail".into()))
        }
    })
}

/// The denominator of ζ(1 − k) in decimal, for k ≥ 2.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_zeta_denominator(k: u32, out: *mut *mut c_char) -> ChromalgStatus {
    guard(|| {
        if k < 2 {
            return Err(Failure(ChromalgStatus::InvalidInput, "k must be at least 2".into()));
        }
        put_string(out, numtheory::zeta_denominator(k).to_string())
    })
}

/// Runs a command line given as a JSON array of arguments (without the program name), for example
/// `["zeta","denom","--k","4"]`. Standard output and error are returned as strings and the
/// command's exit code is written to `exit_code`. The cache is bypassed.
///
/// # Safety
/// `args_json` must be a NUL-terminated string; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn chromalg_run(
    args_json: *const c_char,
    stdout_text: *mut *mut c_char,
    stderr_text: *mut *mut c_char,
    exit_code: *mut c_int,
) -> ChromalgStatus {
    guard(|| {
        let args: Vec<String> = serde_json::from_str(text(args_json)?).map_err(|e| Failure(ChromalgStatus::InvalidInput, e.to_string()))?;
        let argv = ["chromalg".to_string(), "--no-cache".to_string()].into_iter().chain(args);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = chromalg::cli::run(argv, &mut out, &mut err);
        put_string(stdout_text, String::from_utf8_lossy(&out).into_owned())?;
        put_string(stderr_text, String::from_utf8_lossy(&err).into_owned())?;
        put(exit_code, c_int::from(code))
    })
}
