//! C ABI over `linktorus`.
//!
//! Links are opaque `LtLink` handles created by one of the `lt_link_*`
//! constructors and released with [`lt_link_free`]. Every fallible call
//! returns an [`LtStatus`]; on failure the message is available from
//! [`lt_last_error_message`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linktorus::conformal::inf_cross_ratio;
use linktorus::functionals::{refine, Functional};
use linktorus::link::catalogue::StandardLink;
use linktorus::link::file::{link_to_json, parse_link, read_link};
use linktorus::link::random_mobius;
use linktorus::sphere::metric_coefficient;
use linktorus::symplectic::exterior_derivative_check;
use linktorus::{Error, Link2};

/// Result codes. `LT_STATUS_OK` is zero; everything else is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Io = 4,
    BadParameter = 5,
    Geometry = 6,
    NoConvergence = 7,
    Numerical = 8,
    Panic = 99,
}

/// Opaque link handle.
pub struct LtLink {
    inner: Link2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LtCrossRatio {
    pub re: f64,
    pub abs: f64,
    pub theta: f64,
    pub imag_abs: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LtFunctionals {
    pub signed_area: f64,
    pub area: f64,
    pub energy: f64,
    pub grid: u32,
    pub est_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LtSymplectic {
    pub max_err: f64,
    pub sign: i32,
    pub sign_determined: bool,
    pub integral: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> LtStatus {
    match err {
        Error::Parse(_) => LtStatus::Parse,
        Error::Io(_) => LtStatus::Io,
        Error::BadParameter(_) | Error::GridSize(_) | Error::BadPolygon(_) => LtStatus::BadParameter,
        Error::NoConvergence { .. } | Error::Stalled { .. } => LtStatus::NoConvergence,
        Error::NotOnSphere { .. }
        | Error::CoincidentPoints { .. }
        | Error::ImmersionFailure { .. }
        | Error::PoleOnCurve { .. }
        | Error::DisjointnessViolation => LtStatus::Geometry,
        _ => LtStatus::Numerical,
    }
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtStatus::Ok,
        Ok(Err(Failure::Null(arg))) => {
            set_error(format!("null pointer: {arg}"));
            LtStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(arg))) => {
            set_error(format!("{arg} is not valid UTF-8"));
            LtStatus::InvalidUtf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            LtStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, arg: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(arg));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(arg))
}

unsafe fn handle<'a>(p: *const LtLink) -> Result<&'a Link2, Failure> {
    p.as_ref().map(|l| &l.inner).ok_or(Failure::Null("link"))
}

unsafe fn store<T>(out: *mut T, value: T, arg: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(arg));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_link(out: *mut *mut LtLink, inner: Link2) -> Result<(), Failure> {
    store(out, Box::into_raw(Box::new(LtLink { inner })), "out")
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn lt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a link from `lk-1` JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_link_from_json(json: *const c_char, out: *mut *mut LtLink) -> LtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        emit_link(out, parse_link(text(json, "json")?)?)
    })
}

/// Read a link file from disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_link_read(path: *const c_char, out: *mut *mut LtLink) -> LtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        emit_link(out, read_link(std::path::Path::new(text(path, "path")?))?)
    })
}

/// Build a catalogue link such as `hopf`, `separated:1.5`, `parallel:0.8,0.3` or `perturbed:0.1,7`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_link_standard(name: *const c_char, out: *mut *mut LtLink) -> LtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let name: StandardLink = text(name, "name")?.parse()?;
        emit_link(out, name.build()?)
    })
}

/// Image of `link` under a seeded random Möbius transformation.
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_link_transformed(
    link: *const LtLink,
    seed: u64,
    rapidity_max: f64,
    out: *mut *mut LtLink,
) -> LtStatus {
    guard(|| {
        let l = handle(link)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let m = random_mobius(seed, rapidity_max)?;
        emit_link(out, l.transformed(&m))
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `link` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lt_link_free(link: *mut LtLink) {
    if !link.is_null() {
        drop(Box::from_raw(link));
    }
}

/// Serialize a link as `lk-1` JSON. Free the result with [`lt_string_free`].
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_link_to_json(link: *const LtLink, out: *mut *mut c_char) -> LtStatus {
    guard(|| {
        let json = link_to_json(handle(link)?)?;
        store(out, CString::new(json).expect("json has no NUL").into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Metric coefficient g(s, t) of the torus of spheres.
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_metric_coefficient(link: *const LtLink, s: f64, t: f64, out: *mut f64) -> LtStatus {
    guard(|| {
        let g = metric_coefficient(handle(link)?, s, t)?;
        store(out, g, "out")
    })
}

/// Infinitesimal cross ratio density at (s, t).
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_inf_cross_ratio(
    link: *const LtLink,
    s: f64,
    t: f64,
    out: *mut LtCrossRatio,
) -> LtStatus {
    guard(|| {
        let d = inf_cross_ratio(handle(link)?, s, t)?;
        let value = LtCrossRatio { re: d.re, abs: d.abs, theta: d.theta, imag_abs: d.imag_abs };
        store(out, value, "out")
    })
}

/// Signed area, area and cross energy, refined from 32x32 up to `max_grid` until all change by at most `tol`.
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_functionals(
    link: *const LtLink,
    tol: f64,
    max_grid: u32,
    out: *mut LtFunctionals,
) -> LtStatus {
    guard(|| {
        let r = refine(handle(link)?, tol, Functional::All, max_grid as usize)?;
        let value = LtFunctionals {
            signed_area: r.signed_area,
            area: r.area,
            energy: r.energy,
            grid: r.grid_used.0 as u32,
            est_error: r.est_error,
        };
        store(out, value, "out")
    })
}

/// Compare the real cross ratio with the pulled-back exterior derivative on an `n` x `n` grid.
///
/// # Safety
/// `link` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn lt_symplectic_check(link: *const LtLink, n: u32, out: *mut LtSymplectic) -> LtStatus {
    guard(|| {
        let r = exterior_derivative_check(handle(link)?, n as usize)?;
        let value = LtSymplectic {
            max_err: r.max_err,
            sign: r.sign.into(),
            sign_determined: r.sign_determined,
            integral: r.integral,
        };
        store(out, value, "out")
    })
}
