//! C interface to qkzlab.
//!
//! Polynomials are opaque `QkzPoly` handles. Every function returns a [`QkzStatus`]; on failure
//! `qkz_last_error_message` gives the reason for the calling thread. Strings handed out by the
//! library are released with `qkz_string_free`, handles with `qkz_poly_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qkzlab::harness::{self, Suite, VerifyConfig};
use qkzlab::linkpat::OpeningSequence;
use qkzlab::qkz;
use qkzlab::tsscpp::{self, Method, WeightSpec};
use qkzlab::{Error, ExactPoly};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ResourceBound = 5,
    /// The computation failed an internal check; the message has details.
    Internal = 6,
}

/// Path counting method for `qkz_tsscpp_gen_poly`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkzMethod {
    Direct = 0,
    Lgv = 1,
    Extract = 2,
}

/// Opaque polynomial handle.
pub struct QkzPoly(ExactPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(QkzStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match e {
            Error::Parse(_) => QkzStatus::ParseError,
            Error::ResourceBound { .. } | Error::SizeTooLargeForBruteForce { .. } => QkzStatus::ResourceBound,
            Error::SequenceNotInFamily(_) | Error::ExponentCount { .. } => QkzStatus::InvalidArgument,
            _ => QkzStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QkzStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QkzStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            set_error(msg);
            QkzStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(QkzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(QkzStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn poly_arg<'a>(p: *const QkzPoly, what: &str) -> Result<&'a ExactPoly, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn put_poly(out: *mut *mut QkzPoly, p: ExactPoly) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(QkzPoly(p)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fail(QkzStatus::Internal, "string contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses a polynomial such as `1 + 3*tau + 2*tau^2`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_parse(text: *const c_char, out: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| {
        let s = str_arg(text, "text")?;
        put_poly(out, s.parse::<ExactPoly>()?)
    })
}

/// Canonical text of a polynomial. Free the result with `qkz_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_render(p: *const QkzPoly, out: *mut *mut c_char) -> QkzStatus {
    guard(|| put_string(out, poly_arg(p, "polynomial")?.to_string()))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `p` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_free(p: *mut QkzPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `*out = a + b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_add(a: *const QkzPoly, b: *const QkzPoly, out: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| {
        let sum = poly_arg(a, "a")? + poly_arg(b, "b")?;
        put_poly(out, sum)
    })
}

/// `*out = a * b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_mul(a: *const QkzPoly, b: *const QkzPoly, out: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| {
        let prod = poly_arg(a, "a")? * poly_arg(b, "b")?;
        put_poly(out, prod)
    })
}

/// `*out = (a == b)`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_poly_eq(a: *const QkzPoly, b: *const QkzPoly, out: *mut bool) -> QkzStatus {
    guard(|| {
        let eq = poly_arg(a, "a")? == poly_arg(b, "b")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = eq;
        Ok(())
    })
}

/// Weighted TSSCPP polynomial. `weights[k]` is the weight of slice `k` (slice 0 is only used when
/// `modified`); `weights_len` must be at least `n`. With `weights == NULL` the symbolic weights
/// `t0, t1, ...` are used.
///
/// # Safety
/// `weights` must be null or point to `weights_len` live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qkz_tsscpp_gen_poly(
    n: usize,
    modified: bool,
    weights: *const *const QkzPoly,
    weights_len: usize,
    method: QkzMethod,
    out: *mut *mut QkzPoly,
) -> QkzStatus {
    guard(|| {
        let spec = if weights.is_null() {
            WeightSpec::symbolic(n)
        } else {
            if weights_len < n.max(1) {
                return Err(Fail(QkzStatus::InvalidArgument, format!("need {} weights, got {weights_len}", n.max(1))));
            }
            let mut slices = Vec::with_capacity(weights_len);
            for k in 0..weights_len {
                slices.push(poly_arg(*weights.add(k), "weight")?.clone());
            }
            WeightSpec::new(slices)
        };
        let method = match method {
            QkzMethod::Direct => Method::Direct,
            QkzMethod::Lgv => Method::Lgv,
            QkzMethod::Extract => Method::Extract,
        };
        put_poly(out, tsscpp::gen_poly(n, &spec, method, modified))
    })
}

/// Homogeneous component `Psi_a / Psi_{pi_0}` as a polynomial in `tau`, for the non-decreasing
/// sequence `a[0..len]` with `len == n`.
///
/// # Safety
/// `a` must point to `len` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qkz_psi_seq_homogeneous(a: *const usize, len: usize, n: usize, out: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| {
        if a.is_null() && len > 0 {
            return Err(null("sequence"));
        }
        let seq: Vec<usize> = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(a, len).to_vec() };
        if len != n || seq.windows(2).any(|w| w[0] > w[1]) || seq.iter().any(|&x| x == 0 || x > 2 * n) {
            return Err(Fail(QkzStatus::InvalidArgument, format!("{seq:?} is not a non-decreasing sequence of length {n} in 1..={}", 2 * n)));
        }
        put_poly(out, qkz::psi_seq_homogeneous(&OpeningSequence(seq), n))
    })
}

/// Sum of the homogeneous components and its refinement in `t`.
///
/// # Safety
/// `out_sum` and `out_refined` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qkz_sum_rules(n: usize, out_sum: *mut *mut QkzPoly, out_refined: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| {
        if out_sum.is_null() || out_refined.is_null() {
            return Err(null("output pointer"));
        }
        let (sum, refined) = qkz::sum_rules(n);
        put_poly(out_sum, sum)?;
        put_poly(out_refined, refined)
    })
}

/// `N'(t, tau)` minus the refined component sum; zero when the two agree.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkz_conjecture_residual(n: usize, out: *mut *mut QkzPoly) -> QkzStatus {
    guard(|| put_poly(out, qkz::conjecture_residual(n)))
}

/// Runs a verification suite (`tsscpp`, `qkz`, `identities`, `conjectures` or `all`) with default
/// bounds and writes the JSON report (without timings) to `out_json`. `*out_passed` tells whether
/// every check passed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qkz_verify(
    suite: *const c_char,
    max_n: usize,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> QkzStatus {
    guard(|| {
        let name = str_arg(suite, "suite")?;
        let suite = match name {
            "tsscpp" => Suite::Tsscpp,
            "qkz" => Suite::Qkz,
            "identities" => Suite::Identities,
            "conjectures" => Suite::Conjectures,
            "all" => Suite::All,
            other => return Err(Fail(QkzStatus::InvalidArgument, format!("unknown suite {other:?}"))),
        };
        if out_passed.is_null() {
            return Err(null("output pointer"));
        }
        let cfg = VerifyConfig { max_n, ..VerifyConfig::default() };
        let report = harness::run_suite(suite, &cfg);
        *out_passed = report.passed;
        put_string(out_json, report.to_json(false).to_string())
    })
}

/// Message for the last failed call on this thread, or null. Free it with `qkz_string_free`.
#[no_mangle]
pub extern "C" fn qkz_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(m) => CString::new(m.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn qkz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
