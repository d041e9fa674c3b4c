//! C ABI for the `octabasic` crate.
//!
//! Every fallible function returns an [`OctStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`oct_last_error`] on the same thread. Objects returned through
//! out-pointers are owned by the caller and released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use octabasic::cli::{max_allowed, verify_at, Check};
use octabasic::families::{octabasic_coeffs, qjacobi_coeffs, qlaguerre_coeffs, sum2_coeffs, SpecKind};
use octabasic::motzkin::{moment_via_paths, path_to_perm, perm_to_path, WeightedMotzkinPath};
use octabasic::oddfamily::{odd_coeffs, theorem4_distribution, SymmetricChain};
use octabasic::orthopoly::{moments_from_recurrence, RecurrenceCoeffs, Specialized};
use octabasic::permstat::{distribution, moment_via_permutations, Permutation, QDistribution, RunTerm, StatProfile};
use octabasic::{Poly, Var};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OctStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidUtf8 = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OctFamily {
    Octabasic = 0,
    Qjacobi = 1,
    Sum2 = 2,
    Qlaguerre = 3,
    Odd = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OctSpec {
    None = 0,
    T2 = 1,
    T3 = 2,
    Ql = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OctCheck {
    Theorem1 = 0,
    Theorem2 = 1,
    Theorem3 = 2,
    Theorem4 = 3,
    Identity35 = 4,
    Prop1 = 5,
    OddMoments = 6,
    RestrictedCount = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OctRunTerm {
    NMinusRun = 0,
    RunMinusOne = 1,
}

/// Number of ring variables; `oct_poly_eval` expects this many values in the
/// order a, b, r, s, t, u, p, q, v, w, x.
pub const OCT_NUM_VARS: usize = 11;

/// Largest moment index accepted by the moment functions.
pub const OCT_MAX_MOMENT: u32 = 24;

/// Largest permutation size accepted by the enumeration functions.
pub const OCT_MAX_PERM: u32 = 10;

/// Opaque exact Laurent polynomial.
pub struct OctPoly(Poly);

/// Opaque exponent-to-count tally.
pub struct OctDistribution(QDistribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(OctStatus, String);

impl Failure {
    fn new(status: OctStatus, msg: impl Into<String>) -> Self {
        Failure(status, msg.into())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OctStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OctStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            OctStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::new(OctStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(OctStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(OctStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(OctStatus::NullPointer, "null handle"))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior nul removed")
        .into_raw()
}

fn check_range(value: u32, max: u32, what: &str) -> Result<(), Failure> {
    if value > max {
        return Err(Failure::new(
            OctStatus::OutOfRange,
            format!("{what} = {value} exceeds the limit {max}"),
        ));
    }
    Ok(())
}

/// Message describing the most recent failure on this thread, or NULL. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn oct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the JSON term-list format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_from_json(json: *const c_char, out: *mut *mut OctPoly) -> OctStatus {
    guard(|| {
        let text = read_str(json)?;
        let p = Poly::from_json(text).map_err(|e| Failure::new(OctStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(OctPoly(p))))
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable. Free the result with
/// `oct_string_free`.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_to_json(p: *const OctPoly, out: *mut *mut c_char) -> OctStatus {
    guard(|| {
        let p = borrow(p)?;
        write_out(out, c_string(p.0.to_json()))
    })
}

/// Human-readable form such as `1 + a*b^2`.
///
/// # Safety
/// As for `oct_poly_to_json`.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_to_string(p: *const OctPoly, out: *mut *mut c_char) -> OctStatus {
    guard(|| {
        let p = borrow(p)?;
        write_out(out, c_string(p.0.to_string()))
    })
}

/// Number of nonzero terms; 0 for a NULL handle.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_num_terms(p: *const OctPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_equal(a: *const OctPoly, b: *const OctPoly, out: *mut bool) -> OctStatus {
    guard(|| {
        let (a, b) = (borrow(a)?, borrow(b)?);
        write_out(out, a.0 == b.0)
    })
}

/// Evaluates at `values[0..OCT_NUM_VARS]`, in canonical variable order.
///
/// # Safety
/// `values` must point to `OCT_NUM_VARS` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_eval(p: *const OctPoly, values: *const f64, out: *mut f64) -> OctStatus {
    guard(|| {
        let p = borrow(p)?;
        if values.is_null() {
            return Err(Failure::new(OctStatus::NullPointer, "null value array"));
        }
        let values = std::slice::from_raw_parts(values, OCT_NUM_VARS);
        let v = p
            .0
            .eval_with(|var: Var| Some(values[var.index()]))
            .map_err(|e| Failure::new(OctStatus::InvalidArgument, e.to_string()))?;
        write_out(out, v)
    })
}

/// # Safety
/// `p` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oct_poly_free(p: *mut OctPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn coefficients(family: OctFamily, spec: OctSpec, alpha: u32) -> Result<Box<dyn RecurrenceCoeffs>, Failure> {
    let spec = match spec {
        OctSpec::None => None,
        OctSpec::T2 => Some(SpecKind::T2),
        OctSpec::T3 => Some(SpecKind::T3),
        OctSpec::Ql => Some(SpecKind::QL),
    }
    .map(SpecKind::specialization);
    let invalid = |msg: &str| Err(Failure::new(OctStatus::InvalidArgument, msg));
    if spec.is_some() && !matches!(family, OctFamily::Octabasic | OctFamily::Odd) {
        return invalid("a specialization applies only to the octabasic and odd families");
    }
    if alpha != 0 && !matches!(family, OctFamily::Qjacobi | OctFamily::Qlaguerre) {
        return invalid("alpha applies only to qjacobi and qlaguerre");
    }
    Ok(match (family, spec) {
        (OctFamily::Octabasic, None) => Box::new(octabasic_coeffs()),
        (OctFamily::Octabasic, Some(s)) => Box::new(Specialized::new(octabasic_coeffs(), s.substitution().clone())),
        (OctFamily::Odd, None) => Box::new(odd_coeffs(SymmetricChain)),
        (OctFamily::Odd, Some(s)) => Box::new(Specialized::new(odd_coeffs(SymmetricChain), s.restricted_to_chain())),
        (OctFamily::Qjacobi, _) => Box::new(qjacobi_coeffs(alpha)),
        (OctFamily::Sum2, _) => Box::new(sum2_coeffs()),
        (OctFamily::Qlaguerre, _) => Box::new(qlaguerre_coeffs(alpha)),
    })
}

/// The moment `mu_n` of a family from its recurrence.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_moment(
    family: OctFamily,
    spec: OctSpec,
    alpha: u32,
    n: u32,
    out: *mut *mut OctPoly,
) -> OctStatus {
    guard(|| {
        check_range(n, OCT_MAX_MOMENT, "n")?;
        let c = coefficients(family, spec, alpha)?;
        let mut mu = moments_from_recurrence(&c, n as usize).0;
        let m = mu.swap_remove(n as usize);
        write_out(out, Box::into_raw(Box::new(OctPoly(m))))
    })
}

/// `mu_n` of the ten-parameter family as a sum over permutations.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_moment_via_permutations(n: u32, out: *mut *mut OctPoly) -> OctStatus {
    guard(|| {
        check_range(n, OCT_MAX_PERM, "n")?;
        write_out(out, Box::into_raw(Box::new(OctPoly(moment_via_permutations(n as usize)))))
    })
}

/// `mu_n` of the ten-parameter family as a sum over weighted paths.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_moment_via_paths(n: u32, out: *mut *mut OctPoly) -> OctStatus {
    guard(|| {
        check_range(n, OCT_MAX_PERM, "n")?;
        write_out(out, Box::into_raw(Box::new(OctPoly(moment_via_paths(n as usize)))))
    })
}

/// Tally over `S_n` of the statistic described by `profile`, e.g.
/// `"run=n-run; op=2,1; clos=2,1; cont=2,1; sing=2,1"`.
///
/// # Safety
/// `profile` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution(
    n: u32,
    profile: *const c_char,
    out: *mut *mut OctDistribution,
) -> OctStatus {
    guard(|| {
        check_range(n, OCT_MAX_PERM, "n")?;
        let profile: StatProfile = read_str(profile)?
            .parse()
            .map_err(|e: octabasic::permstat::ProfileError| Failure::new(OctStatus::ParseError, e.to_string()))?;
        let d = distribution(n as usize, &profile);
        write_out(out, Box::into_raw(Box::new(OctDistribution(d))))
    })
}

/// Tally over `S_n` of `run_term + 2 lsg* + rsg* + n(sigma)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_theorem4_distribution(
    n: u32,
    run_term: OctRunTerm,
    out: *mut *mut OctDistribution,
) -> OctStatus {
    guard(|| {
        check_range(n, OCT_MAX_PERM, "n")?;
        let term = match run_term {
            OctRunTerm::NMinusRun => RunTerm::NMinusRun,
            OctRunTerm::RunMinusOne => RunTerm::RunMinusOne,
        };
        let d = theorem4_distribution(n as usize, term);
        write_out(out, Box::into_raw(Box::new(OctDistribution(d))))
    })
}

/// Number of distinct exponents; 0 for a NULL handle.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution_len(d: *const OctDistribution) -> usize {
    d.as_ref().map_or(0, |d| d.0 .0.len())
}

/// The `index`-th `(exponent, count)` pair in increasing exponent order.
///
/// # Safety
/// `d` must be a live handle; `exponent` and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution_entry(
    d: *const OctDistribution,
    index: usize,
    exponent: *mut i64,
    count: *mut u64,
) -> OctStatus {
    guard(|| {
        let d = borrow(d)?;
        let (&e, &c) = d.0 .0.iter().nth(index).ok_or_else(|| {
            Failure::new(OctStatus::OutOfRange, format!("index {index} out of range"))
        })?;
        write_out(exponent, e)?;
        write_out(count, c)
    })
}

/// Whether the tally equals the coefficients of `n!_q`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution_is_qfactorial(
    d: *const OctDistribution,
    n: u32,
    out: *mut bool,
) -> OctStatus {
    guard(|| {
        let d = borrow(d)?;
        write_out(out, d.0.is_qfactorial(n as usize))
    })
}

/// CSV with header `exponent,count`.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution_to_csv(d: *const OctDistribution, out: *mut *mut c_char) -> OctStatus {
    guard(|| {
        let d = borrow(d)?;
        write_out(out, c_string(d.0.to_csv()))
    })
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oct_distribution_free(d: *mut OctDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Permutation in one-line notation to its weighted path, e.g.
/// `"NE(0,0),SE(0,0)"`.
///
/// # Safety
/// `perm` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_bijection_decode(perm: *const c_char, out: *mut *mut c_char) -> OctStatus {
    guard(|| {
        let sigma: Permutation = read_str(perm)?
            .parse()
            .map_err(|e: octabasic::permstat::PermError| Failure::new(OctStatus::ParseError, e.to_string()))?;
        write_out(out, c_string(perm_to_path(&sigma).to_string()))
    })
}

/// Weighted path to its permutation in one-line notation.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_bijection_encode(path: *const c_char, out: *mut *mut c_char) -> OctStatus {
    guard(|| {
        let parse_err = |e: octabasic::motzkin::PathError| Failure::new(OctStatus::ParseError, e.to_string());
        let path: WeightedMotzkinPath = read_str(path)?.parse().map_err(parse_err)?;
        let sigma = path_to_perm(&path).map_err(parse_err)?;
        write_out(out, c_string(sigma.to_string()))
    })
}

/// Runs one exhaustive check at size `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oct_verify(check: OctCheck, n: u32, out: *mut bool) -> OctStatus {
    guard(|| {
        let check = match check {
            OctCheck::Theorem1 => Check::Theorem1,
            OctCheck::Theorem2 => Check::Theorem2,
            OctCheck::Theorem3 => Check::Theorem3,
            OctCheck::Theorem4 => Check::Theorem4,
            OctCheck::Identity35 => Check::Identity35,
            OctCheck::Prop1 => Check::Prop1,
            OctCheck::OddMoments => Check::OddMoments,
            OctCheck::RestrictedCount => Check::RestrictedCount,
        };
        check_range(n, max_allowed(check) as u32, "n")?;
        write_out(out, verify_at(check, n as usize))
    })
}
