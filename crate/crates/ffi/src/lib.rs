//! C interface to `irrsum`.
//!
//! Objects are opaque handles created by `irrsum_*` constructors and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`IrrsumStatus`]; on failure `irrsum_last_error_message` describes the
//! error for the calling thread. Strings returned through out-parameters are
//! owned by the caller and released with `irrsum_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irrsum::carlitz::{closed_form, exact_all_prime_sum, exact_prime_sum};
use irrsum::primesum::{numeric_prime_sum, numeric_zeta, psi_count, verify, SumRequest};
use irrsum::ratfun::pade_reconstruct;
use irrsum::{Error, FieldDesc, RatFun, USeries};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IrrsumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedExponent = 3,
    DivisionByZero = 4,
    ReconstructionFailed = 5,
    Internal = 6,
    InsufficientPrecision = 7,
}

/// A finite field `F_q`.
pub struct IrrsumField(FieldDesc);

/// A reduced element of `F_q(T)`.
pub struct IrrsumRatFun(RatFun);

/// A truncated Laurent series in `u = 1/T`.
pub struct IrrsumSeries(USeries);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> IrrsumStatus {
    match e {
        Error::UnsupportedExponent { .. } => IrrsumStatus::UnsupportedExponent,
        Error::DivisionByZero => IrrsumStatus::DivisionByZero,
        Error::ReconstructionFailed(_) => IrrsumStatus::ReconstructionFailed,
        Error::Internal(_) => IrrsumStatus::Internal,
        Error::InsufficientPrecision(_) => IrrsumStatus::InsufficientPrecision,
        Error::InvalidField(_)
        | Error::ConstantPolynomial
        | Error::SizeBound(_)
        | Error::InvalidArgument(_)
        | Error::Malformed(_) => IrrsumStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics to `Internal`.
fn guard<F>(f: F) -> IrrsumStatus
where
    F: FnOnce() -> Result<(), (IrrsumStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            IrrsumStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IrrsumStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (IrrsumStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (IrrsumStatus, String) {
    (IrrsumStatus::NullPointer, format!("{what} is null"))
}

unsafe fn field_ref<'a>(f: *const IrrsumField) -> Result<&'a FieldDesc, (IrrsumStatus, String)> {
    f.as_ref().map(|f| &f.0).ok_or_else(|| null("field"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (IrrsumStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (IrrsumStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|e| (IrrsumStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message describing the last failure on this thread; empty after a
/// success. Valid until the next `irrsum_*` call on the same thread.
#[no_mangle]
pub extern "C" fn irrsum_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates `F_q` for a prime power `q`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn irrsum_field_new(q: u64, out: *mut *mut IrrsumField) -> IrrsumStatus {
    guard(|| {
        let f = FieldDesc::from_order(q).map_err(lib_err)?;
        put(out, IrrsumField(f))
    })
}

/// # Safety
/// `field` must be null or a handle from `irrsum_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irrsum_field_free(field: *mut IrrsumField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order `q`, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn irrsum_field_order(field: *const IrrsumField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.order() as u64)
}

/// Exact sum of `G_p(1/P^k)` over monic irreducible `P`; requires `(q-1) | k`.
///
/// # Safety
/// `field` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_exact_prime_sum(
    field: *const IrrsumField,
    k: u64,
    out: *mut *mut IrrsumRatFun,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        put(out, IrrsumRatFun(exact_prime_sum(f, k).map_err(lib_err)?))
    })
}

/// Exact sum of `G_p(1/P^k)` over all irreducible `P`, monic or not.
///
/// # Safety
/// `field` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_exact_all_prime_sum(
    field: *const IrrsumField,
    k: u64,
    out: *mut *mut IrrsumRatFun,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        put(out, IrrsumRatFun(exact_all_prime_sum(f, k).map_err(lib_err)?))
    })
}

/// Closed form for small `k/(q-1)`. When no closed form applies, `*out` is
/// set to null and the call still succeeds.
///
/// # Safety
/// `field` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_closed_form(
    field: *const IrrsumField,
    k: u64,
    out: *mut *mut IrrsumRatFun,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        match closed_form(f, k).map_err(lib_err)? {
            Some(r) => put(out, IrrsumRatFun(r)),
            None => {
                *out = ptr::null_mut();
                Ok(())
            }
        }
    })
}

/// Truncated sum over irreducibles of degree at most `max_degree`, exact
/// through `u^(k(max_degree+1) - 1)`.
///
/// # Safety
/// `field` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_numeric_prime_sum(
    field: *const IrrsumField,
    k: u64,
    max_degree: u32,
    monic_only: bool,
    out: *mut *mut IrrsumSeries,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        let req = SumRequest::new(f, k, max_degree, monic_only).map_err(lib_err)?;
        put(out, IrrsumSeries(numeric_prime_sum(&req).map_err(lib_err)?))
    })
}

/// Truncated `sum 1/A^k` over monic `A` of degree at most `max_degree`.
///
/// # Safety
/// `field` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_numeric_zeta(
    field: *const IrrsumField,
    k: u64,
    max_degree: u32,
    out: *mut *mut IrrsumSeries,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        put(out, IrrsumSeries(numeric_zeta(f, k, max_degree).map_err(lib_err)?))
    })
}

/// Rational function with numerator and denominator degrees bounded by
/// `num_deg` and `den_deg` whose expansion matches `series`.
///
/// # Safety
/// `series` must be a live series handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_pade_reconstruct(
    series: *const IrrsumSeries,
    num_deg: usize,
    den_deg: usize,
    out: *mut *mut IrrsumRatFun,
) -> IrrsumStatus {
    guard(|| {
        let s = series.as_ref().ok_or_else(|| null("series"))?;
        put(out, IrrsumRatFun(pade_reconstruct(&s.0, num_deg, den_deg).map_err(lib_err)?))
    })
}

/// Verification report as JSON. `*matches` receives whether the exact value
/// agrees with the truncated sum; it may be null.
///
/// # Safety
/// `field` must be a live field handle, `out` valid for writing and
/// `matches` null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_verify_json(
    field: *const IrrsumField,
    k: u64,
    max_degree: u32,
    matches: *mut bool,
    out: *mut *mut c_char,
) -> IrrsumStatus {
    guard(|| {
        let f = field_ref(field)?;
        let r = verify(f, k, max_degree, false).map_err(lib_err)?;
        let json = serde_json::to_string(&r).map_err(|e| (IrrsumStatus::Internal, e.to_string()))?;
        put_string(out, json)?;
        if !matches.is_null() {
            *matches = r.matches;
        }
        Ok(())
    })
}

/// Number of `p`-tuples of nonnegative integers with sum `r` and minimum 0.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_psi_count(p: u32, r: u32, out: *mut u64) -> IrrsumStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if !irrsum::field::is_prime(p as u64) {
            return Err((IrrsumStatus::InvalidArgument, format!("{p} is not prime")));
        }
        if p > 16 || r > 64 {
            return Err((IrrsumStatus::InvalidArgument, "p <= 16 and r <= 64 required".into()));
        }
        *out = psi_count(p, r);
        Ok(())
    })
}

/// Text form, e.g. `(1)/(T^4+T^2)`.
///
/// # Safety
/// `r` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_ratfun_to_string(
    r: *const IrrsumRatFun,
    out: *mut *mut c_char,
) -> IrrsumStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("rational function"))?;
        put_string(out, r.0.to_string())
    })
}

/// JSON form `{num, den}`.
///
/// # Safety
/// `r` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_ratfun_to_json(
    r: *const IrrsumRatFun,
    out: *mut *mut c_char,
) -> IrrsumStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("rational function"))?;
        let json = serde_json::to_string(&r.0).map_err(|e| (IrrsumStatus::Internal, e.to_string()))?;
        put_string(out, json)
    })
}

/// Parses the JSON form produced by `irrsum_ratfun_to_json`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_ratfun_from_json(
    json: *const c_char,
    out: *mut *mut IrrsumRatFun,
) -> IrrsumStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (IrrsumStatus::InvalidArgument, e.to_string()))?;
        let r: RatFun =
            serde_json::from_str(text).map_err(|e| (IrrsumStatus::InvalidArgument, e.to_string()))?;
        put(out, IrrsumRatFun(r))
    })
}

/// Whether `r` is zero; false for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn irrsum_ratfun_is_zero(r: *const IrrsumRatFun) -> bool {
    r.as_ref().is_some_and(|r| r.0.is_zero())
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irrsum_ratfun_free(r: *mut IrrsumRatFun) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Text form, e.g. `u^4 + u^6 + O(u^8)`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_series_to_string(
    s: *const IrrsumSeries,
    out: *mut *mut c_char,
) -> IrrsumStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        put_string(out, s.0.to_string())
    })
}

/// JSON form `{field, v, N, coeffs}`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn irrsum_series_to_json(
    s: *const IrrsumSeries,
    out: *mut *mut c_char,
) -> IrrsumStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        let json = serde_json::to_string(&s.0).map_err(|e| (IrrsumStatus::Internal, e.to_string()))?;
        put_string(out, json)
    })
}

/// Absolute precision `N`: coefficients below `u^N` are exact. Returns -1
/// for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn irrsum_series_precision(s: *const IrrsumSeries) -> i64 {
    s.as_ref().map_or(-1, |s| s.0.precision())
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irrsum_series_free(s: *mut IrrsumSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irrsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
