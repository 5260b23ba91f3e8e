//! C interface to `pretzel_lo`.
//!
//! Knots and certificates cross the boundary as opaque heap handles that
//! the caller releases with the matching `_free` function. Every fallible
//! call returns a `PlStatus`; on failure `pl_last_error` describes the
//! most recent error raised on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pretzel_lo::report::{analyze, to_json};
use pretzel_lo::{
    cover_threshold, find_r1_star, limit_t, realize_cover, realize_slope, solve_locus, theta0,
    Certificate, Error, PretzelKnot, SurgerySlope, ToleranceConfig,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidKnot = 2,
    Unsupported = 3,
    InvalidInput = 4,
    OutOfRange = 5,
    BelowThreshold = 6,
    NoConvergence = 7,
    NoBracket = 8,
    NumericalFailure = 9,
    Panic = 10,
}

impl From<&Error> for PlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidKnot(_) => PlStatus::InvalidKnot,
            Error::Unsupported { .. } => PlStatus::Unsupported,
            Error::InvalidInput(_) => PlStatus::InvalidInput,
            Error::OutOfRange(_) => PlStatus::OutOfRange,
            Error::BelowThreshold { .. } => PlStatus::BelowThreshold,
            Error::NoConvergence { .. } => PlStatus::NoConvergence,
            Error::NoBracket | Error::NoCrossing { .. } | Error::DegenerateBracket { .. } => {
                PlStatus::NoBracket
            }
            Error::SingularSystem { .. }
            | Error::NonUnimodular { .. }
            | Error::NotElliptic { .. }
            | Error::DegenerateDenominator { .. } => PlStatus::NumericalFailure,
        }
    }
}

/// Solver tolerances. Pass `NULL` wherever a config is accepted to use
/// the defaults from `pl_config_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PlConfig {
    pub root_tol: f64,
    pub residual_tol: f64,
    pub max_iter: u32,
    pub march_step: f64,
    pub boundary_eps: f64,
}

impl From<ToleranceConfig> for PlConfig {
    fn from(c: ToleranceConfig) -> Self {
        PlConfig {
            root_tol: c.root_tol,
            residual_tol: c.residual_tol,
            max_iter: c.max_iter as u32,
            march_step: c.march_step,
            boundary_eps: c.boundary_eps,
        }
    }
}

impl From<PlConfig> for ToleranceConfig {
    fn from(c: PlConfig) -> Self {
        ToleranceConfig {
            root_tol: c.root_tol,
            residual_tol: c.residual_tol,
            max_iter: c.max_iter as usize,
            march_step: c.march_step,
            boundary_eps: c.boundary_eps,
        }
    }
}

/// One point of the trace locus.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PlLocus {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Square of the meridian trace.
    pub t_squared: f64,
}

/// Opaque knot handle.
pub struct PlKnot(PretzelKnot);

/// Opaque certificate handle.
pub struct PlCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, turning errors and panics into a status code.
fn guard<F>(f: F) -> PlStatus
where
    F: FnOnce() -> Result<(), PlStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            PlStatus::Panic
        }
    }
}

fn fail(e: Error) -> PlStatus {
    let status = PlStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> PlStatus {
    set_error(format!("{what} is NULL"));
    PlStatus::NullPointer
}

unsafe fn knot_ref<'a>(knot: *const PlKnot) -> Result<&'a PretzelKnot, PlStatus> {
    knot.as_ref().map(|k| &k.0).ok_or_else(|| null("knot"))
}

unsafe fn config(cfg: *const PlConfig) -> Result<ToleranceConfig, PlStatus> {
    let cfg = cfg
        .as_ref()
        .map_or_else(ToleranceConfig::default, |c| (*c).into());
    cfg.validate().map_err(fail)?;
    Ok(cfg)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), PlStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NUL").into_raw()
}

/// Default tolerances.
#[no_mangle]
pub extern "C" fn pl_config_default() -> PlConfig {
    ToleranceConfig::default().into()
}

/// Message for the last error on this thread, or `NULL` if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a knot from three odd twist counts in any order.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_knot_new(a1: u32, a2: u32, a3: u32, out: *mut *mut PlKnot) -> PlStatus {
    guard(|| {
        let knot = PretzelKnot::new(a1, a2, a3).map_err(fail)?;
        write(out, Box::into_raw(Box::new(PlKnot(knot))))
    })
}

/// # Safety
/// `knot` must be `NULL` or a handle from `pl_knot_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_knot_free(knot: *mut PlKnot) {
    if !knot.is_null() {
        drop(Box::from_raw(knot));
    }
}

/// Writes the sorted twist counts into `out[0..3]`.
///
/// # Safety
/// `knot` must be a live handle and `out` valid for three writes.
#[no_mangle]
pub unsafe extern "C" fn pl_knot_twists(knot: *const PlKnot, out: *mut u32) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        ptr::copy_nonoverlapping(knot.a().as_ptr(), out, 3);
        Ok(())
    })
}

/// Limit of the squared meridian trace as `r1 -> 2`.
///
/// # Safety
/// `knot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_limit_t(knot: *const PlKnot, out: *mut f64) -> PlStatus {
    guard(|| write(out, limit_t(knot_ref(knot)?)))
}

/// # Safety
/// `knot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_theta0(knot: *const PlKnot, out: *mut f64) -> PlStatus {
    guard(|| write(out, theta0(knot_ref(knot)?)))
}

/// Smallest cover order that is certified.
///
/// # Safety
/// `knot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_cover_threshold(knot: *const PlKnot, out: *mut u32) -> PlStatus {
    guard(|| write(out, cover_threshold(knot_ref(knot)?)))
}

/// Right end of the elliptic stretch, where the squared trace reaches 4.
///
/// # Safety
/// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_r1_star(
    knot: *const PlKnot,
    cfg: *const PlConfig,
    out: *mut f64,
) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        let r = find_r1_star(knot, &config(cfg)?).map_err(fail)?;
        write(out, r)
    })
}

/// # Safety
/// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_solve_locus(
    knot: *const PlKnot,
    r1: f64,
    cfg: *const PlConfig,
    out: *mut PlLocus,
) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        let p = solve_locus(knot, r1, &config(cfg)?).map_err(fail)?;
        write(
            out,
            PlLocus {
                r1: p.r1,
                r2: p.r2,
                r3: p.r3,
                gamma: p.gamma,
                delta: p.delta,
                t_squared: p.t_squared,
            },
        )
    })
}

/// Certifies the surgery slope `m/l`.
///
/// # Safety
/// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_realize_slope(
    knot: *const PlKnot,
    m: i64,
    l: i64,
    cfg: *const PlConfig,
    out: *mut *mut PlCertificate,
) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        let slope = SurgerySlope::new(m, l).map_err(fail)?;
        let cert = realize_slope(knot, slope, &config(cfg)?).map_err(fail)?;
        write(out, Box::into_raw(Box::new(PlCertificate(cert))))
    })
}

/// Certifies the `n`-fold cyclic branched cover.
///
/// # Safety
/// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_realize_cover(
    knot: *const PlKnot,
    n: u32,
    cfg: *const PlConfig,
    out: *mut *mut PlCertificate,
) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        let cert = realize_cover(knot, n, &config(cfg)?).map_err(fail)?;
        write(out, Box::into_raw(Box::new(PlCertificate(cert))))
    })
}

/// # Safety
/// `cert` must be `NULL` or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_free(cert: *mut PlCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Whether every residual on the certificate is within tolerance.
/// Returns false for `NULL`.
///
/// # Safety
/// `cert` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_passed(cert: *const PlCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.0.passed)
}

/// `r1` of the certified point, NaN for `NULL`.
///
/// # Safety
/// `cert` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_r1(cert: *const PlCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.r1)
}

/// Boundary slope `-phi / theta_eff` at the certified point, NaN for `NULL`.
///
/// # Safety
/// `cert` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_slope(cert: *const PlCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.holonomy.slope)
}

/// Largest residual recorded on the certificate, NaN for `NULL`.
///
/// # Safety
/// `cert` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_worst_residual(cert: *const PlCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.worst_residual())
}

/// Serializes the certificate; release the string with `pl_string_free`.
///
/// # Safety
/// `cert` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_certificate_to_json(
    cert: *const PlCertificate,
    out: *mut *mut c_char,
) -> PlStatus {
    guard(|| {
        let cert = cert.as_ref().ok_or_else(|| null("certificate"))?;
        write(out, c_string(to_json(&cert.0)))
    })
}

/// Full analysis report as JSON; release with `pl_string_free`.
///
/// # Safety
/// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_analyze_json(
    knot: *const PlKnot,
    cfg: *const PlConfig,
    out: *mut *mut c_char,
) -> PlStatus {
    guard(|| {
        let knot = knot_ref(knot)?;
        let report = analyze(knot, &config(cfg)?).map_err(fail)?;
        write(out, c_string(to_json(&report)))
    })
}

/// # Safety
/// `s` must be `NULL` or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
