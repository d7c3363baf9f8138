//! C ABI for quasilab.
//!
//! Potentials are opaque handles created by `qlab_potential_*` and released
//! with `qlab_potential_free`. Every fallible call returns a `QlabStatus`;
//! on failure `qlab_last_error` holds a message for the calling thread.
//! Array outputs follow the usual two-call pattern: pass a capacity, receive
//! the required length in `*written`, and get `QLAB_STATUS_BUFFER_TOO_SMALL`
//! when the buffer is short.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use quasilab::cocycle::{converged_le, CocycleParams, LeConfig};
use quasilab::dos::truncated_spectrum;
use quasilab::model::{amo_potential, FourierPotential};
use quasilab::polyalg::AberthOptions;
use quasilab::winding::winding_n;
use quasilab::zeros::fn_zeros;
use quasilab::Error;

/// Opaque potential handle.
pub struct QlabPotential(FourierPotential);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlabStatus {
    Ok = 0,
    InvalidInput = 1,
    LeNotConverged = 2,
    QuantizationViolated = 3,
    ZeroOnContour = 4,
    RootFinderFailed = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QlabComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for QlabComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<QlabComplex> for Complex64 {
    fn from(z: QlabComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QlabLeResult {
    pub value: f64,
    pub est_error: f64,
    pub n_used: u64,
    pub grid_used: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QlabWinding {
    pub total_winding: i64,
    pub nu_n: f64,
    pub grid_used: u64,
    pub min_log_abs: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QlabStatus {
    match err.exit_code() {
        2 => QlabStatus::LeNotConverged,
        3 => QlabStatus::QuantizationViolated,
        4 => QlabStatus::ZeroOnContour,
        5 => QlabStatus::RootFinderFailed,
        _ => QlabStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), QlabStatus>>(f: F) -> QlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlabStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            QlabStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, QlabStatus>;
}

impl<T> OrStatus<T> for quasilab::Result<T> {
    fn or_status(self) -> Result<T, QlabStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn null(what: &str) -> QlabStatus {
    set_error(format!("{what} is null"));
    QlabStatus::NullPointer
}

unsafe fn potential<'a>(p: *const QlabPotential) -> Result<&'a FourierPotential, QlabStatus> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("potential handle"))
}

unsafe fn write_slice(values: &[Complex64], out: *mut QlabComplex, capacity: usize, written: *mut usize) -> Result<(), QlabStatus> {
    if written.is_null() {
        return Err(null("written"));
    }
    *written = values.len();
    if values.len() > capacity {
        set_error(format!("buffer holds {capacity} values, {} needed", values.len()));
        return Err(QlabStatus::BufferTooSmall);
    }
    if !values.is_empty() && out.is_null() {
        return Err(null("output buffer"));
    }
    for (i, v) in values.iter().enumerate() {
        *out.add(i) = (*v).into();
    }
    Ok(())
}

/// Almost-Mathieu potential `2λ cos θ`.
#[no_mangle]
pub unsafe extern "C" fn qlab_potential_amo(lambda: f64, out: *mut *mut QlabPotential) -> QlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pot = amo_potential(lambda).or_status()?;
        *out = Box::into_raw(Box::new(QlabPotential(pot)));
        Ok(())
    })
}

/// Potential `Σ v̂_k e^{ikθ}` from parallel arrays of frequencies and
/// coefficient parts.
#[no_mangle]
pub unsafe extern "C" fn qlab_potential_from_coeffs(
    ks: *const i32,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QlabPotential,
) -> QlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if len > 0 && (ks.is_null() || re.is_null() || im.is_null()) {
            return Err(null("coefficient array"));
        }
        let terms: Vec<(i32, Complex64)> = (0..len)
            .map(|i| (*ks.add(i), Complex64::new(*re.add(i), *im.add(i))))
            .collect();
        let pot = FourierPotential::new(terms).or_status()?;
        *out = Box::into_raw(Box::new(QlabPotential(pot)));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qlab_potential_free(p: *mut QlabPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qlab_potential_eval(p: *const QlabPotential, theta: QlabComplex, out: *mut QlabComplex) -> QlabStatus {
    guard(|| {
        let pot = potential(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = pot.eval(theta.into()).into();
        Ok(())
    })
}

/// Lyapunov exponent at `E`, imaginary phase `y`, doubling until successive
/// estimates differ by less than `tol`.
#[no_mangle]
pub unsafe extern "C" fn qlab_converged_le(
    p: *const QlabPotential,
    alpha: f64,
    energy: QlabComplex,
    y: f64,
    tol: f64,
    out: *mut QlabLeResult,
) -> QlabStatus {
    guard(|| {
        let pot = potential(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = converged_le(pot, alpha, energy.into(), y, tol, &LeConfig::default()).or_status()?;
        *out = QlabLeResult {
            value: r.value,
            est_error: r.est_error,
            n_used: r.n_used as u64,
            grid_used: r.grid_used as u64,
        };
        Ok(())
    })
}

/// Winding of `x ↦ f_n(E, x + iy)` starting from a grid of `grid` phases.
#[no_mangle]
pub unsafe extern "C" fn qlab_winding_n(
    p: *const QlabPotential,
    alpha: f64,
    energy: QlabComplex,
    y: f64,
    n: usize,
    grid: usize,
    out: *mut QlabWinding,
) -> QlabStatus {
    guard(|| {
        let pot = potential(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = CocycleParams::new(alpha, energy.into(), y, n).or_status()?;
        let w = winding_n(pot, &params, grid).or_status()?;
        *out = QlabWinding {
            total_winding: w.total_winding,
            nu_n: w.nu_n,
            grid_used: w.grid_used as u64,
            min_log_abs: w.min_log_abs,
        };
        Ok(())
    })
}

/// Eigenvalues of the `n × n` truncation at phase `x + iy`.
#[no_mangle]
pub unsafe extern "C" fn qlab_truncated_spectrum(
    p: *const QlabPotential,
    alpha: f64,
    x: f64,
    y: f64,
    n: usize,
    out: *mut QlabComplex,
    capacity: usize,
    written: *mut usize,
) -> QlabStatus {
    guard(|| {
        let pot = potential(p)?;
        let rs = truncated_spectrum(pot, alpha, x, y, n).or_status()?;
        write_slice(&rs.roots, out, capacity, written)
    })
}

/// Zeros of `z ↦ f_n(E, z)`, `z = e^{i(x+iy)}`.
#[no_mangle]
pub unsafe extern "C" fn qlab_fn_zeros(
    p: *const QlabPotential,
    alpha: f64,
    energy: QlabComplex,
    n: usize,
    out: *mut QlabComplex,
    capacity: usize,
    written: *mut usize,
) -> QlabStatus {
    guard(|| {
        let pot = potential(p)?;
        let rs = fn_zeros(pot, alpha, energy.into(), n, &AberthOptions::default())
            .and_then(|r| r.require_converged())
            .or_status()?;
        write_slice(&rs.roots, out, capacity, written)
    })
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qlab_status_string(status: QlabStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QlabStatus::Ok => c"ok",
        QlabStatus::InvalidInput => c"invalid input",
        QlabStatus::LeNotConverged => c"Lyapunov exponent not converged",
        QlabStatus::QuantizationViolated => c"quantization or convexity violated",
        QlabStatus::ZeroOnContour => c"zero on contour",
        QlabStatus::RootFinderFailed => c"root finder failed",
        QlabStatus::NullPointer => c"null pointer",
        QlabStatus::BufferTooSmall => c"buffer too small",
        QlabStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

#[no_mangle]
pub extern "C" fn qlab_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}
