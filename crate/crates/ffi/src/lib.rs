//! C interface to `gti-asym`.
//!
//! Every function returns a [`GtiStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`gti_last_error_message`]. Objects are opaque and released with their
//! matching `_free` function.

use std::borrow::Cow;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gti_asym::coeffs::LGCoefficientTable;
use gti_asym::error::Error;
use gti_asym::eval::{eval_gamma_lg, eval_gti, eval_upper_gamma_lg, EvalResult, LGEvalConfig};
use gti_asym::gti::{Gti, PrecisionMode};
use gti_asym::oracle::{oracle_gti_with, refine_zero_with, CiSiIntegrator, QuadratureConfig};
use gti_asym::zeros::expand_zero_gti;
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GtiStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the domain of the operation.
    Domain = 2,
    /// Quadrature, iteration or series failure.
    Numerical = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GtiFamily {
    Ci = 0,
    Si = 1,
    Ti = 2,
    LowerCi = 3,
    LowerSi = 4,
    LowerTi = 5,
}

impl From<GtiFamily> for Gti {
    fn from(f: GtiFamily) -> Self {
        match f {
            GtiFamily::Ci => Gti::Ci,
            GtiFamily::Si => Gti::Si,
            GtiFamily::Ti => Gti::Ti,
            GtiFamily::LowerCi => Gti::LowerCi,
            GtiFamily::LowerSi => Gti::LowerSi,
            GtiFamily::LowerTi => Gti::LowerTi,
        }
    }
}

/// `(re + i im) * exp(log_scale)`. `eta_bound` is NaN when no bound was
/// requested or none applies.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GtiValue {
    pub re: f64,
    pub im: f64,
    pub log_scale: f64,
    pub eta_bound: f64,
    pub cancellation_warning: bool,
}

impl From<&EvalResult> for GtiValue {
    fn from(r: &EvalResult) -> Self {
        let m = r.mantissa();
        Self {
            re: m.re,
            im: m.im,
            log_scale: r.log_scale,
            eta_bound: r.eta_bound.unwrap_or(f64::NAN),
            cancellation_warning: r.cancellation_warning,
        }
    }
}

/// Coefficient table handle.
pub struct GtiCoefficients {
    table: Cow<'static, LGCoefficientTable>,
    order: usize,
}

/// Quadrature oracle bound to one value of `a`, reusing panels across calls.
pub struct GtiOracle {
    integ: CiSiIntegrator,
    cfg: QuadratureConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: Error) -> GtiStatus {
    let s = if e.is_domain() { GtiStatus::Domain } else { GtiStatus::Numerical };
    set_error(e.to_string());
    s
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), GtiStatus>) -> GtiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GtiStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            GtiStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, GtiStatus> {
    // SAFETY: callers pass either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| {
        set_error("null pointer argument".into());
        GtiStatus::NullPointer
    })
}

fn mode(extended: bool) -> PrecisionMode {
    if extended {
        PrecisionMode::Extended
    } else {
        PrecisionMode::Standard
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gti_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gti_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: `buf` holds at least `len > n` bytes.
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Liouville-Green value of a family at `a theta`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_eval(
    family: GtiFamily,
    a: f64,
    theta: f64,
    alpha: f64,
    order: usize,
    extended: bool,
    bound: bool,
    out: *mut GtiValue,
) -> GtiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let cfg = LGEvalConfig::new(order, mode(extended), bound).map_err(status_of)?;
        let r = eval_gti(a, theta, family.into(), alpha, &cfg).map_err(status_of)?;
        *out = GtiValue::from(&r);
        Ok(())
    })
}

/// Lower (`upper == false`) or upper incomplete gamma function at `a z`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_eval_gamma(
    upper: bool,
    a: f64,
    z_re: f64,
    z_im: f64,
    order: usize,
    extended: bool,
    bound: bool,
    out: *mut GtiValue,
) -> GtiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let cfg = LGEvalConfig::new(order, mode(extended), bound).map_err(status_of)?;
        let z = Complex64::new(z_re, z_im);
        let r = if upper { eval_upper_gamma_lg(a, z, &cfg) } else { eval_gamma_lg(a, z, &cfg) };
        *out = GtiValue::from(&r.map_err(status_of)?);
        Ok(())
    })
}

/// The `m`-th positive zero in the scaled variable `theta`, assembled from
/// `k` terms of its uniform expansion.
///
/// # Safety
/// `theta` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_zero(
    family: GtiFamily,
    a: f64,
    m: u32,
    k: usize,
    alpha: f64,
    theta: *mut f64,
) -> GtiStatus {
    guard(|| {
        let out = out_ref(theta)?;
        *out = expand_zero_gti(family.into(), a, m, k, alpha).map_err(status_of)?.theta_assembled;
        Ok(())
    })
}

/// Build the coefficient table through `order`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_coefficients_new(order: usize, out: *mut *mut GtiCoefficients) -> GtiStatus {
    guard(|| {
        let out = out_ref(out)?;
        if order == 0 {
            set_error("order must be at least 1".into());
            return Err(GtiStatus::Domain);
        }
        let t = LGCoefficientTable::with_order(order).map_err(status_of)?;
        *out = Box::into_raw(Box::new(GtiCoefficients { table: t, order }));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or come from [`gti_coefficients_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn gti_coefficients_free(table: *mut GtiCoefficients) {
    if !table.is_null() {
        // SAFETY: ownership returns from the pointer made by Box::into_raw.
        drop(unsafe { Box::from_raw(table) });
    }
}

fn with_table(
    table: *const GtiCoefficients,
    s: usize,
    f: impl FnOnce(&LGCoefficientTable) -> f64,
    out: *mut f64,
) -> GtiStatus {
    guard(|| {
        // SAFETY: the handle is null or live.
        let t = unsafe { table.as_ref() }.ok_or_else(|| {
            set_error("null table".into());
            GtiStatus::NullPointer
        })?;
        let out = out_ref(out)?;
        if s == 0 || s > t.order {
            set_error(format!("index {s} outside 1..={}", t.order));
            return Err(GtiStatus::Domain);
        }
        *out = f(&t.table);
        Ok(())
    })
}

/// Real part `R_s(theta)` of the coefficient on the imaginary axis.
///
/// # Safety
/// `table` must be null or live; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_coefficients_r(table: *const GtiCoefficients, s: usize, theta: f64, out: *mut f64) -> GtiStatus {
    with_table(table, s, |t| t.r(s).eval_f64(theta), out)
}

/// Imaginary part `L_s(theta)` of the coefficient on the imaginary axis.
///
/// # Safety
/// `table` must be null or live; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_coefficients_l(table: *const GtiCoefficients, s: usize, theta: f64, out: *mut f64) -> GtiStatus {
    with_table(table, s, |t| t.l(s).eval_f64(theta), out)
}

/// `E_s(x)` for real `x` off the singular point.
///
/// # Safety
/// `table` must be null or live; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_coefficients_e(table: *const GtiCoefficients, s: usize, x: f64, out: *mut f64) -> GtiStatus {
    with_table(table, s, |t| t.e(s).eval_c64(Complex64::new(x, 0.0)).re, out)
}

/// Quadrature oracle for parameter `a`, sized for arguments up to `x_hint`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_oracle_new(a: f64, x_hint: f64, extended: bool, out: *mut *mut GtiOracle) -> GtiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let cfg = QuadratureConfig::for_mode(mode(extended));
        let integ = CiSiIntegrator::new(a, x_hint, &cfg).map_err(status_of)?;
        *out = Box::into_raw(Box::new(GtiOracle { integ, cfg }));
        Ok(())
    })
}

/// # Safety
/// `oracle` must be null or come from [`gti_oracle_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn gti_oracle_free(oracle: *mut GtiOracle) {
    if !oracle.is_null() {
        // SAFETY: ownership returns from the pointer made by Box::into_raw.
        drop(unsafe { Box::from_raw(oracle) });
    }
}

/// Reference value of a family at `x` (unscaled argument).
///
/// # Safety
/// `oracle` must be null or live and not used concurrently; `out` null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gti_oracle_value(
    oracle: *mut GtiOracle,
    family: GtiFamily,
    alpha: f64,
    x: f64,
    out: *mut f64,
) -> GtiStatus {
    guard(|| {
        let o = out_ref(oracle)?;
        let out = out_ref(out)?;
        *out = oracle_gti_with(&mut o.integ, family.into(), alpha, x).map_err(status_of)?;
        Ok(())
    })
}

/// Zero of a family in `theta` located by the oracle, starting from `theta0`.
///
/// # Safety
/// As for [`gti_oracle_value`].
#[no_mangle]
pub unsafe extern "C" fn gti_oracle_refine_zero(
    oracle: *mut GtiOracle,
    family: GtiFamily,
    alpha: f64,
    theta0: f64,
    out: *mut f64,
) -> GtiStatus {
    guard(|| {
        let o = out_ref(oracle)?;
        let out = out_ref(out)?;
        let r = refine_zero_with(&mut o.integ, family.into(), alpha, theta0, &o.cfg).map_err(status_of)?;
        *out = r.theta_star;
        Ok(())
    })
}
