//! C ABI over `hodgelab`.
//!
//! Every function returns an [`HlStatus`]; on failure the message is available
//! from [`hl_last_error`] on the same thread. Objects come back as opaque
//! handles owned by the caller and released with the matching `_free`.
//! Strings returned through out-pointers are released with [`hl_string_free`].
//! Panics never cross the boundary; they surface as `HL_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use hodgelab::experiment::{prepare_output_dir, run_experiment, write_outputs, ExperimentConfig};
use hodgelab::majorant::{majorant_coefficients, parse_rational, rational_to_f64, MajorantSeries};
use hodgelab::torus::form::{from_json_str, to_json_string};
use hodgelab::torus::hodge;
use hodgelab::torus::norms::norms;
use hodgelab::torus::FourierForm;
use hodgelab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Contract = 3,
    Io = 4,
    Panic = 5,
}

/// A differential form on the flat torus.
pub struct HlForm(FourierForm);

/// Exact majorant coefficients `x_1..x_N`.
pub struct HlMajorant(MajorantSeries);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct HlNorms {
    pub l2: f64,
    pub c0: f64,
    pub c1: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlOperator {
    Dbar = 0,
    Del = 1,
    DbarStar = 2,
    DelStar = 3,
    Laplacian = 4,
    Green = 5,
    Harmonic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(HlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Contract(_) | Error::SeedRejected(_) | Error::DegenerateDraw | Error::Hypothesis(_) => HlStatus::Contract,
            Error::Io(_) => HlStatus::Io,
            _ => HlStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HlStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HlStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            HlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HlStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(HlStatus::InvalidArgument, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed only once.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a form from its JSON layout.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_form_from_json(json: *const c_char, out: *mut *mut HlForm) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = from_json_str(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(HlForm(f)));
        Ok(())
    })
}

/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_form_to_json(form: *const HlForm, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = form.as_ref().ok_or_else(|| null("form"))?;
        *out = into_c_string(to_json_string(&f.0))?;
        Ok(())
    })
}

/// # Safety
/// `form` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_form_free(form: *mut HlForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Applies an operator, returning a new handle.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_form_apply(form: *const HlForm, op: HlOperator, out: *mut *mut HlForm) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = &form.as_ref().ok_or_else(|| null("form"))?.0;
        let r = match op {
            HlOperator::Dbar => hodge::dbar(f),
            HlOperator::Del => hodge::del(f),
            HlOperator::DbarStar => hodge::dbar_star(f),
            HlOperator::DelStar => hodge::del_star(f),
            HlOperator::Laplacian => hodge::laplacian(f),
            HlOperator::Green => hodge::green(f),
            HlOperator::Harmonic => hodge::harmonic(f),
        };
        *out = Box::into_raw(Box::new(HlForm(r)));
        Ok(())
    })
}

/// L², C⁰ and C¹ norms; `oversample` is the grid factor (at least 2 is used).
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_form_norms(form: *const HlForm, oversample: usize, out: *mut HlNorms) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = &form.as_ref().ok_or_else(|| null("form"))?.0;
        let r = norms(f, oversample);
        *out = HlNorms { l2: r.l2, c0: r.c0, c1: r.c1 };
        Ok(())
    })
}

/// Builds `x_1..x_order` for `c` and `x1` given as `p/q`, integers or decimals.
///
/// # Safety
/// `c` and `x1` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_new(
    c: *const c_char,
    x1: *const c_char,
    order: usize,
    out: *mut *mut HlMajorant,
) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = parse_rational(read_str(c, "c")?)?;
        let x1 = parse_rational(read_str(x1, "x1")?)?;
        *out = Box::into_raw(Box::new(HlMajorant(majorant_coefficients(&c, &x1, order)?)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_free(m: *mut HlMajorant) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of coefficients, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_order(m: *const HlMajorant) -> usize {
    m.as_ref().map_or(0, |m| m.0.order())
}

fn coeff(m: &HlMajorant, k: usize) -> Result<&hodgelab::majorant::BigRational, Fail> {
    m.0.coeff(k)
        .ok_or_else(|| Fail(HlStatus::InvalidArgument, format!("k={k} outside 1..={}", m.0.order())))
}

/// `x_k` rounded to double.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_coeff(m: *const HlMajorant, k: usize, out: *mut f64) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = rational_to_f64(coeff(m.as_ref().ok_or_else(|| null("majorant"))?, k)?);
        Ok(())
    })
}

/// `x_k` exactly, as `p/q` or an integer.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_coeff_exact(m: *const HlMajorant, k: usize, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = into_c_string(coeff(m.as_ref().ok_or_else(|| null("majorant"))?, k)?.to_string())?;
        Ok(())
    })
}

/// Radius of convergence; `INFINITY` when `x1 = 0`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_majorant_radius(m: *const HlMajorant, out: *mut f64) -> HlStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let m = m.as_ref().ok_or_else(|| null("majorant"))?;
        *out = m.0.radius().map_or(f64::INFINITY, |r| rational_to_f64(&r));
        Ok(())
    })
}

/// Runs an experiment from its JSON config. Writes the report JSON to
/// `report_out` and whether every check passed to `pass_out`. When `out_dir`
/// is non-null the CSV tables and `report.json` are also written there.
///
/// # Safety
/// `config_json` must be a NUL-terminated string, `out_dir` null or one, and
/// both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hl_run_experiment(
    config_json: *const c_char,
    out_dir: *const c_char,
    report_out: *mut *mut c_char,
    pass_out: *mut bool,
) -> HlStatus {
    guard(|| {
        let report_out = out_ref(report_out, "report_out")?;
        let pass_out = out_ref(pass_out, "pass_out")?;
        let cfg = ExperimentConfig::from_json(read_str(config_json, "config_json")?)?;
        let dir = if out_dir.is_null() { None } else { Some(Path::new(read_str(out_dir, "out_dir")?)) };
        if let Some(d) = dir {
            prepare_output_dir(d)?;
        }
        let outcome = run_experiment(&cfg)?;
        if let Some(d) = dir {
            write_outputs(&outcome, d)?;
        }
        *report_out = into_c_string(outcome.report.to_json_pretty())?;
        *pass_out = outcome.report.pass;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, HlStatus::Panic);
        let msg = unsafe { CStr::from_ptr(hl_last_error()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
        assert_eq!(guard(|| Ok(())), HlStatus::Ok);
        assert!(hl_last_error().is_null());
    }
}
