//! C ABI over `betatri`.
//!
//! Samples are opaque heap handles created by `bt_*_sample_new` and released
//! by the matching `bt_*_sample_free`. Every fallible call returns a
//! [`BtStatus`] and writes its result through an out pointer; on failure the
//! message is available from [`bt_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use betatri::eigentri::{lambda_max, lambda_min};
use betatri::ensembles::{
    sample_hermite, sample_laguerre, HermiteParams, HermiteSample, LaguerreParams, LaguerreSample,
    SymTridiagonal,
};
use betatri::experiments::{self, Ensemble, Extremal, Side, TailQuery};
use betatri::forms::{hermite_form, laguerre_form};
use betatri::randkit::{self, RngStream};
use betatri::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Parameter = 3,
    Input = 4,
    Dimension = 5,
    Guard = 6,
    Divergence = 7,
    Fit = 8,
    Calibration = 9,
    Precision = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtEnsemble {
    Hermite = 0,
    Laguerre = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtSide {
    Upper = 0,
    Lower = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtExtremal {
    Max = 0,
    Min = 1,
}

/// Tail probability query; `kappa` is ignored for the Hermite ensemble.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BtTailQuery {
    pub ensemble: BtEnsemble,
    pub side: BtSide,
    pub extremal: BtExtremal,
    pub n: usize,
    pub beta: f64,
    pub kappa: f64,
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Hit count with its Clopper-Pearson 95% interval.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BtTailEstimate {
    pub hits: u64,
    pub samples: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Opaque beta-Hermite draw.
pub struct BtHermiteSample {
    sample: HermiteSample,
    matrix: SymTridiagonal,
}

/// Opaque beta-Laguerre draw.
pub struct BtLaguerreSample {
    sample: LaguerreSample,
    matrix: SymTridiagonal,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BtStatus {
    match e {
        Error::Domain(_) => BtStatus::Domain,
        Error::Parameter(_) => BtStatus::Parameter,
        Error::Input(_) => BtStatus::Input,
        Error::Dimension { .. } => BtStatus::Dimension,
        Error::Guard { .. } => BtStatus::Guard,
        Error::Divergence(_) => BtStatus::Divergence,
        Error::Fit(_) => BtStatus::Fit,
        Error::Calibration(_) => BtStatus::Calibration,
        Error::Precision(_) => BtStatus::Precision,
    }
}

/// Runs `f`, writing its value to `out` and mapping errors and panics to a status.
fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, Error>) -> BtStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return BtStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` is non-null and the caller guarantees it is writable.
            unsafe { out.write(v) };
            BtStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BtStatus::Panic
        }
    }
}

fn null_handle() -> Error {
    Error::Input("null handle".into())
}

/// Default bisection tolerance when the caller passes `tol <= 0`.
fn tolerance(t: &SymTridiagonal, tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        1e-12 * (1.0 + t.norm())
    }
}

/// # Safety
/// `v` must point to `len` readable doubles (or be null with `len == 0`).
unsafe fn slice<'a>(v: *const f64, len: usize) -> Result<&'a [f64], Error> {
    if len == 0 {
        return Ok(&[]);
    }
    if v.is_null() {
        return Err(Error::Input("null vector".into()));
    }
    Ok(std::slice::from_raw_parts(v, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bt_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(s) => s,
            Err(_) => c"",
        };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `ln Gamma(x)` for `x > 0`.
///
/// # Safety
/// `out` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn bt_log_gamma(x: f64, out: *mut f64) -> BtStatus {
    guard(out, || randkit::log_gamma(x))
}

/// Mean of a chi variable with `r > 0` degrees of freedom.
///
/// # Safety
/// `out` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn bt_mean_chi(r: f64, out: *mut f64) -> BtStatus {
    guard(out, || randkit::mean_chi(r))
}

/// Draws a beta-Hermite matrix from stream `stream` under `seed`.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with `bt_hermite_sample_free`.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_new(
    n: usize,
    beta: f64,
    seed: u64,
    stream: u64,
    out: *mut *mut BtHermiteSample,
) -> BtStatus {
    guard(out, || {
        let params = HermiteParams::new(n, beta)?;
        let sample = sample_hermite(params, &mut RngStream::new(seed, stream));
        let matrix = sample.matrix();
        Ok(Box::into_raw(Box::new(BtHermiteSample { sample, matrix })))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from `bt_hermite_sample_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_free(h: *mut BtHermiteSample) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Matrix size of a handle, 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_n(h: *const BtHermiteSample) -> usize {
    h.as_ref().map_or(0, |h| h.sample.n())
}

/// Largest eigenvalue to within `tol` (`tol <= 0` selects a default).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_lambda_max(
    h: *const BtHermiteSample,
    tol: f64,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        Ok(lambda_max(&h.matrix, tolerance(&h.matrix, tol))?.value)
    })
}

/// Smallest eigenvalue to within `tol` (`tol <= 0` selects a default).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_lambda_min(
    h: *const BtHermiteSample,
    tol: f64,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        Ok(lambda_min(&h.matrix, tolerance(&h.matrix, tol))?.value)
    })
}

/// Centred quadratic form `v^T (H - 2 sqrt(n) I) v` of a length-`n` vector `v`.
///
/// # Safety
/// `h` must be a live handle, `v` must point to `len` doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn bt_hermite_sample_form(
    h: *const BtHermiteSample,
    v: *const f64,
    len: usize,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        hermite_form(&h.sample, slice(v, len)?)
    })
}

/// Draws a beta-Laguerre matrix from stream `stream` under `seed`.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with `bt_laguerre_sample_free`.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_new(
    n: usize,
    kappa: f64,
    beta: f64,
    seed: u64,
    stream: u64,
    out: *mut *mut BtLaguerreSample,
) -> BtStatus {
    guard(out, || {
        let params = LaguerreParams::new(n, kappa, beta)?;
        let sample = sample_laguerre(params, &mut RngStream::new(seed, stream));
        let matrix = sample.matrix();
        Ok(Box::into_raw(Box::new(BtLaguerreSample { sample, matrix })))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from `bt_laguerre_sample_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_free(h: *mut BtLaguerreSample) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Matrix size of a handle, 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_n(h: *const BtLaguerreSample) -> usize {
    h.as_ref().map_or(0, |h| h.sample.n())
}

/// Largest eigenvalue to within `tol` (`tol <= 0` selects a default).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_lambda_max(
    h: *const BtLaguerreSample,
    tol: f64,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        Ok(lambda_max(&h.matrix, tolerance(&h.matrix, tol))?.value)
    })
}

/// Smallest eigenvalue to within `tol` (`tol <= 0` selects a default).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_lambda_min(
    h: *const BtLaguerreSample,
    tol: f64,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        Ok(lambda_min(&h.matrix, tolerance(&h.matrix, tol))?.value)
    })
}

/// Centred form `kappa^{-1/2} v^T (L - (sqrt(kappa) + sqrt(n))^2 I) v`.
///
/// # Safety
/// `h` must be a live handle, `v` must point to `len` doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn bt_laguerre_sample_form(
    h: *const BtLaguerreSample,
    v: *const f64,
    len: usize,
    out: *mut f64,
) -> BtStatus {
    guard(out, || {
        let h = h.as_ref().ok_or_else(null_handle)?;
        laguerre_form(&h.sample, slice(v, len)?)
    })
}

/// Monte Carlo tail estimate; `workers == 0` uses every core. Results do not
/// depend on `workers`.
///
/// # Safety
/// `q` must point to a valid query and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn bt_estimate_tail(
    q: *const BtTailQuery,
    workers: usize,
    out: *mut BtTailEstimate,
) -> BtStatus {
    guard(out, || {
        let q = q
            .as_ref()
            .ok_or_else(|| Error::Input("null query".into()))?;
        let query = TailQuery {
            ensemble: match q.ensemble {
                BtEnsemble::Hermite => Ensemble::Hermite,
                BtEnsemble::Laguerre => Ensemble::Laguerre,
            },
            side: match q.side {
                BtSide::Upper => Side::Upper,
                BtSide::Lower => Side::Lower,
            },
            extremal: match q.extremal {
                BtExtremal::Max => Extremal::Max,
                BtExtremal::Min => Extremal::Min,
            },
            n: q.n,
            beta: q.beta,
            kappa: match q.ensemble {
                BtEnsemble::Hermite => None,
                BtEnsemble::Laguerre => Some(q.kappa),
            },
            eps: q.eps,
            samples: q.samples,
            seed: q.seed,
        };
        let e = experiments::estimate_tail(&query, workers)?;
        Ok(BtTailEstimate {
            hits: e.hits,
            samples: e.samples,
            p_hat: e.p_hat,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
        })
    })
}
