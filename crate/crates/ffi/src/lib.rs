//! C interface to `q2fourier`.
//!
//! Every function returns a [`QfStatus`]; results go through out-pointers.
//! On failure the message is available from [`qf_last_error_message`] on
//! the same thread. Panics are caught at the boundary and reported as
//! `QF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use q2fourier::qcalculus::{GridFunction, GridWindow};
use q2fourier::qcore::q_gamma;
use q2fourier::qfourier::{forward_transform, inverse_transform, make_plan_with, solve_q, TransformPlan};
use q2fourier::qtrig::{cos_alpha, exp_alpha, sin_alpha};
use q2fourier::{QError, QParams, SeriesControl, C64};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    /// Parameter outside the supported domain.
    Domain = 2,
    NotConverged = 3,
    /// Required working precision exceeds the configured ceiling.
    Cancellation = 4,
    Pole = 5,
    /// Buffer lengths or windows do not match, or q fails the strict
    /// grid condition.
    Grid = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfComplex {
    pub re: f64,
    pub im: f64,
}

impl From<QfComplex> for C64 {
    fn from(z: QfComplex) -> C64 {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for QfComplex {
    fn from(z: C64) -> QfComplex {
        QfComplex { re: z.re, im: z.im }
    }
}

/// Opaque transform plan.
pub struct QfPlan {
    plan: TransformPlan,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &QError) -> QfStatus {
    match err {
        QError::Domain(_) => QfStatus::Domain,
        QError::NotConverged { .. } => QfStatus::NotConverged,
        QError::Cancellation { .. } => QfStatus::Cancellation,
        QError::Pole(_) => QfStatus::Pole,
        QError::WindowTooSmall(_) | QError::GridMismatch(_) | QError::GridIncompatible { .. } => QfStatus::Grid,
        _ => QfStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Q(QError),
}

impl From<QError> for Fail {
    fn from(e: QError) -> Self {
        Fail::Q(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QfStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            QfStatus::NullPointer
        }
        Ok(Err(Fail::Q(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            QfStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(v);
    Ok(())
}

fn trig(f: fn(C64, &QParams, &SeriesControl) -> q2fourier::Result<C64>, q: f64, alpha: f64, x: QfComplex, out: *mut QfComplex) -> QfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let p = QParams::new(q, alpha)?;
        let v = f(x.into(), &p, &SeriesControl::default())?;
        unsafe { write(out, v.into(), "out") }
    })
}

/// `cos_α(x; q²)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_cos_alpha(q: f64, alpha: f64, x: QfComplex, out: *mut QfComplex) -> QfStatus {
    trig(cos_alpha, q, alpha, x, out)
}

/// `sin_α(x; q²)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_sin_alpha(q: f64, alpha: f64, x: QfComplex, out: *mut QfComplex) -> QfStatus {
    trig(sin_alpha, q, alpha, x, out)
}

/// `e_α(x; q²)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_exp_alpha(q: f64, alpha: f64, x: QfComplex, out: *mut QfComplex) -> QfStatus {
    trig(exp_alpha, q, alpha, x, out)
}

/// The q-gamma function for real `z > 0`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_q_gamma(z: f64, q: f64, out: *mut f64) -> QfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let v = q_gamma(&z, &q, &SeriesControl::default())?;
        write(out, v, "out")
    })
}

/// The `q` in (0, 1) with `1 - q = q^(2m)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_solve_q(m: u32, out: *mut f64) -> QfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        write(out, solve_q(m)?, "out")
    })
}

/// Builds a transform plan for inputs on exponents `in_min..=in_max` and
/// outputs on `out_min..=out_max`. Release it with [`qf_plan_free`].
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_plan_new(
    q: f64,
    alpha: f64,
    in_min: i32,
    in_max: i32,
    out_min: i32,
    out_max: i32,
    strict_grid: bool,
    out: *mut *mut QfPlan,
) -> QfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let plan = make_plan_with(
            QParams::new(q, alpha)?,
            GridWindow::new(in_min, in_max)?,
            GridWindow::new(out_min, out_max)?,
            SeriesControl::default(),
            strict_grid,
        )?;
        write(out, Box::into_raw(Box::new(QfPlan { plan })), "out")
    })
}

/// Releases a plan. Null is ignored.
///
/// # Safety
/// `plan` must be null or a pointer from [`qf_plan_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qf_plan_free(plan: *mut QfPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// The normalization constant of the plan's transform.
///
/// # Safety
/// `plan` must be null or live; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_plan_norm_constant(plan: *const QfPlan, out: *mut f64) -> QfStatus {
    guard(|| {
        let p = plan.as_ref().ok_or(Fail::Null("plan"))?;
        write(out, p.plan.norm_constant(), "out")
    })
}

unsafe fn apply(
    plan: *const QfPlan,
    inverse: bool,
    pos: *const QfComplex,
    neg: *const QfComplex,
    len: usize,
    out_pos: *mut QfComplex,
    out_neg: *mut QfComplex,
    out_len: usize,
) -> QfStatus {
    guard(|| {
        let p = &plan.as_ref().ok_or(Fail::Null("plan"))?.plan;
        for (ptr, name) in [(pos as *const u8, "pos"), (neg as _, "neg"), (out_pos as _, "out_pos"), (out_neg as _, "out_neg")] {
            if ptr.is_null() {
                return Err(Fail::Null(name));
            }
        }
        let (from, to) = if inverse {
            (p.output_window(), p.input_window())
        } else {
            (p.input_window(), p.output_window())
        };
        if len != from.len() || out_len != to.len() {
            return Err(QError::GridMismatch(format!(
                "buffers hold {len} -> {out_len} samples per branch, plan needs {} -> {}",
                from.len(),
                to.len()
            ))
            .into());
        }
        let read = |ptr: *const QfComplex| std::slice::from_raw_parts(ptr, len).iter().map(|&z| z.into()).collect();
        let f = GridFunction::new(*p.params(), from, read(pos), read(neg))?;
        let g = if inverse { inverse_transform(&f, p)? } else { forward_transform(&f, p)? };
        let dst_pos = std::slice::from_raw_parts_mut(out_pos, out_len);
        let dst_neg = std::slice::from_raw_parts_mut(out_neg, out_len);
        for (d, &z) in dst_pos.iter_mut().zip(g.pos()) {
            *d = z.into();
        }
        for (d, &z) in dst_neg.iter_mut().zip(g.neg()) {
            *d = z.into();
        }
        Ok(())
    })
}

/// Forward transform. `pos[i]`, `neg[i]` are the samples at `±q^(in_min+i)`;
/// results are written likewise for the output window.
///
/// # Safety
/// Input buffers must hold `len` readable values, output buffers `out_len`
/// writable values; `plan` must be live.
#[no_mangle]
pub unsafe extern "C" fn qf_plan_forward(
    plan: *const QfPlan,
    pos: *const QfComplex,
    neg: *const QfComplex,
    len: usize,
    out_pos: *mut QfComplex,
    out_neg: *mut QfComplex,
    out_len: usize,
) -> QfStatus {
    apply(plan, false, pos, neg, len, out_pos, out_neg, out_len)
}

/// Inverse transform from the output window back onto the input window.
///
/// # Safety
/// As for [`qf_plan_forward`], with the windows' roles swapped.
#[no_mangle]
pub unsafe extern "C" fn qf_plan_inverse(
    plan: *const QfPlan,
    pos: *const QfComplex,
    neg: *const QfComplex,
    len: usize,
    out_pos: *mut QfComplex,
    out_neg: *mut QfComplex,
    out_len: usize,
) -> QfStatus {
    apply(plan, true, pos, neg, len, out_pos, out_neg, out_len)
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}
