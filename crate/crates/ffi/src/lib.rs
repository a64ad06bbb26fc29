//! C API over the `gemo` library.
//!
//! Every fallible call returns a [`GemoStatus`]; on anything but
//! `GEMO_STATUS_OK` the message is available from [`gemo_last_error`] on the
//! same thread until the next failing call. Objects are opaque handles
//! created by `*_new`/constructor functions and released with the matching
//! `*_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gemo::config::RunConfig;
use gemo::deform::{Deformation, Domain};
use gemo::error::{ErrorKind, StageError};
use gemo::pct::CoordinateMap;
use gemo::pipeline::{Problem, SolveReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GemoStatus {
    Ok = 0,
    /// A null pointer, bad UTF-8 or an out-of-range index.
    InvalidArgument = 1,
    /// Rejected input: configuration, expression or parameter values.
    Input = 2,
    /// The computation itself failed.
    Failure = 3,
    /// A bug; the library caught a panic.
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GemoBuiltin {
    Zero = 0,
    /// μ = (αx)²; the parameter is α.
    Quadratic = 1,
    /// 1 + μ = exp(−γx); the parameter is γ.
    Exponential = 2,
}

/// μ and its first two derivatives at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GemoTriple {
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
}

pub struct GemoDeformation {
    inner: Deformation,
}

pub struct GemoMap {
    inner: CoordinateMap,
}

pub struct GemoSpectrum {
    inner: SolveReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl ToString) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: GemoStatus, message: impl ToString) -> GemoStatus {
    set_error(message);
    status
}

fn stage(e: StageError) -> GemoStatus {
    let status = match e.kind {
        ErrorKind::Input => GemoStatus::Input,
        ErrorKind::Failure => GemoStatus::Failure,
    };
    fail(status, e)
}

fn guard(f: impl FnOnce() -> GemoStatus) -> GemoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(GemoStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, GemoStatus> {
    if p.is_null() {
        return Err(fail(GemoStatus::InvalidArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GemoStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, GemoStatus> {
    p.as_ref()
        .ok_or_else(|| fail(GemoStatus::InvalidArgument, format!("{what} is null")))
}

fn store<T>(out: *mut *mut T, value: T) -> GemoStatus {
    if out.is_null() {
        return fail(GemoStatus::InvalidArgument, "output pointer is null");
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    GemoStatus::Ok
}

fn write<T>(out: *mut T, value: T) -> GemoStatus {
    if out.is_null() {
        return fail(GemoStatus::InvalidArgument, "output pointer is null");
    }
    unsafe { *out = value };
    GemoStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gemo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gemo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// One of the built-in deformations on its default domain.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gemo_deformation_builtin(
    kind: GemoBuiltin,
    parameter: f64,
    out: *mut *mut GemoDeformation,
) -> GemoStatus {
    guard(|| {
        let d = match kind {
            GemoBuiltin::Zero => Ok(Deformation::zero()),
            GemoBuiltin::Quadratic => Deformation::quadratic(parameter),
            GemoBuiltin::Exponential => Deformation::exponential(parameter),
        };
        match d {
            Ok(inner) => store(out, GemoDeformation { inner }),
            Err(e) => fail(GemoStatus::Input, e),
        }
    })
}

/// μ(x) from an expression in `x` on `[lo, hi]` (either end may be
/// infinite). `names`/`values` bind `count` named parameters.
///
/// # Safety
/// `expr` and each of the `count` entries of `names` must be NUL-terminated
/// strings; `values` must hold `count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_deformation_from_expr(
    expr: *const c_char,
    names: *const *const c_char,
    values: *const f64,
    count: usize,
    lo: f64,
    hi: f64,
    out: *mut *mut GemoDeformation,
) -> GemoStatus {
    guard(|| {
        let expr = tri!(text(expr, "expr"));
        let mut params = BTreeMap::new();
        if count > 0 {
            if names.is_null() || values.is_null() {
                return fail(GemoStatus::InvalidArgument, "parameter arrays are null");
            }
            for i in 0..count {
                let name = tri!(text(*names.add(i), "parameter name"));
                params.insert(name.to_string(), *values.add(i));
            }
        }
        let domain = tri!(Domain::new(lo, hi).map_err(|e| fail(GemoStatus::Input, e)));
        match Deformation::from_expression(expr, params, domain) {
            Ok(inner) => store(out, GemoDeformation { inner }),
            Err(e) => fail(GemoStatus::Input, e),
        }
    })
}

/// # Safety
/// `d` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemo_deformation_free(d: *mut GemoDeformation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// μ, μ′ and μ″ at `x`.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_deformation_eval(d: *const GemoDeformation, x: f64, out: *mut GemoTriple) -> GemoStatus {
    guard(|| {
        let d = tri!(handle(d, "deformation"));
        match d.inner.evaluate_triple(x) {
            Ok(t) => write(
                out,
                GemoTriple {
                    mu: t.mu,
                    mu1: t.mu1,
                    mu2: t.mu2,
                },
            ),
            Err(e) => fail(GemoStatus::Input, e),
        }
    })
}

/// The map `z(x) = ∫ dx/(1 + μ)` for a copy of `d`, with `z(0) = 0` when 0
/// is in the domain.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_map_new(d: *const GemoDeformation, out: *mut *mut GemoMap) -> GemoStatus {
    guard(|| {
        let d = tri!(handle(d, "deformation"));
        match CoordinateMap::new(d.inner.clone()) {
            Ok(inner) => store(out, GemoMap { inner }),
            Err(e) => fail(GemoStatus::Failure, e),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemo_map_free(m: *mut GemoMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `z` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_map_forward(m: *const GemoMap, x: f64, z: *mut f64) -> GemoStatus {
    guard(|| {
        let m = tri!(handle(m, "map"));
        match m.inner.forward_map(x) {
            Ok(v) => write(z, v),
            Err(e) => fail(GemoStatus::Input, e),
        }
    })
}

/// # Safety
/// `m` must be a live handle and `x` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_map_inverse(m: *const GemoMap, z: f64, x: *mut f64) -> GemoStatus {
    guard(|| {
        let m = tri!(handle(m, "map"));
        match m.inner.inverse_map(z) {
            Ok(v) => write(x, v),
            Err(e) => fail(GemoStatus::Input, e),
        }
    })
}

/// Image of the domain under the map; ends may be infinite.
///
/// # Safety
/// `m` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_map_image(m: *const GemoMap, lo: *mut f64, hi: *mut f64) -> GemoStatus {
    guard(|| {
        let m = tri!(handle(m, "map"));
        let image = m.inner.image();
        match write(lo, image.lo) {
            GemoStatus::Ok => write(hi, image.hi),
            s => s,
        }
    })
}

/// Solves the problem described by config text (same format as the CLI
/// config files). Nothing is written to disk.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_solve(config: *const c_char, out: *mut *mut GemoSpectrum) -> GemoStatus {
    guard(|| {
        let config = tri!(text(config, "config"));
        let report = RunConfig::parse(config).and_then(Problem::build).and_then(|p| p.solve());
        match report {
            Ok(inner) => store(out, GemoSpectrum { inner }),
            Err(e) => stage(e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gemo_spectrum_free(s: *mut GemoSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of solves in the result: 1, or 2 for `space = both` (x first).
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gemo_spectrum_solves(s: *const GemoSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.inner.solves.len())
}

/// Copies up to `capacity` eigenvalues of solve `index` into `buffer` and
/// stores how many there are in `count`. Pass a null buffer to query the
/// count alone.
///
/// # Safety
/// `s` must be a live handle, `buffer` null or valid for `capacity`
/// doubles, and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn gemo_spectrum_eigenvalues(
    s: *const GemoSpectrum,
    index: usize,
    buffer: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> GemoStatus {
    guard(|| {
        let s = tri!(handle(s, "spectrum"));
        let Some(solve) = s.inner.solves.get(index) else {
            return fail(GemoStatus::InvalidArgument, format!("solve index {index} out of range"));
        };
        let values = &solve.eigenvalues;
        if !buffer.is_null() {
            ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len().min(capacity));
        }
        write(count, values.len())
    })
}
