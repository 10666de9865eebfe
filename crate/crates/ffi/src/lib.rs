//! C interface to `ifsp`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns an [`IfspStatus`] and writes its result through an out pointer;
//! on failure, [`ifsp_last_error_message`] describes the error. Panics are
//! caught and reported as `IFSP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ifsp::chain::{backward_sample_batch, simulate_forward, RngStream};
use ifsp::ifs::{build_theorem_ifsp, cantor_ifsp, triangular_ifsp};
use ifsp::stats::{ks_distance, one_step_stationarity};
use ifsp::{ContinuousDistribution, Error, Ifsp};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Construction = 4,
    Numeric = 5,
    Integrity = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque handle to a continuous distribution.
pub struct IfspDistribution(ContinuousDistribution);

/// Opaque handle to an iterated function system with probabilities.
pub struct IfspSystem(Ifsp);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(IfspStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => IfspStatus::Domain,
            Error::Construction(_) => IfspStatus::Construction,
            Error::Numeric(_) => IfspStatus::Numeric,
            Error::Integrity(_) => IfspStatus::Integrity,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => IfspStatus::Parse,
            Error::Io(_) => IfspStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IfspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            IfspStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside ifsp");
            IfspStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(IfspStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(IfspStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn buffer<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `ifsp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ifsp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a specifier such as `exp:1`, `triangular`, `cantor`,
/// `tabulated:<csv>` or `empirical:<csv>`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_distribution_from_spec(
    spec: *const c_char,
    out: *mut *mut IfspDistribution,
) -> IfspStatus {
    guard(|| {
        let d = ContinuousDistribution::from_spec(text(spec, "spec")?)?;
        write(out, Box::into_raw(Box::new(IfspDistribution(d))), "out")
    })
}

/// # Safety
/// `dist` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ifsp_distribution_free(dist: *mut IfspDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// `F(x)` for finite `x`.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_distribution_cdf(
    dist: *const IfspDistribution,
    x: f64,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let v = borrow(dist, "dist")?.0.eval_cdf(x)?;
        write(out, v, "out")
    })
}

/// `F⁻¹(u)` for `u` in `[0, 1]`; `F⁻¹(1)` may be `+inf`.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_distribution_quantile(
    dist: *const IfspDistribution,
    u: f64,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let v = borrow(dist, "dist")?.0.eval_quantile(u)?;
        write(out, v, "out")
    })
}

/// The `n`-map system `F⁻¹ ∘ u_i ∘ F` with equal probabilities.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_theorem(
    dist: *const IfspDistribution,
    n: usize,
    out: *mut *mut IfspSystem,
) -> IfspStatus {
    guard(|| {
        let sys = build_theorem_ifsp(&borrow(dist, "dist")?.0, n)?;
        write(out, Box::into_raw(Box::new(IfspSystem(sys))), "out")
    })
}

/// `cantor` or `triangular`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_builtin(name: *const c_char, out: *mut *mut IfspSystem) -> IfspStatus {
    guard(|| {
        let sys = match text(name, "name")? {
            "cantor" => cantor_ifsp(),
            "triangular" => triangular_ifsp(),
            other => {
                return Err(Failure(
                    IfspStatus::InvalidArgument,
                    format!("unknown builtin system {other:?}"),
                ))
            }
        };
        write(out, Box::into_raw(Box::new(IfspSystem(sys))), "out")
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_from_json(json: *const c_char, out: *mut *mut IfspSystem) -> IfspStatus {
    guard(|| {
        let sys = Ifsp::from_json(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(IfspSystem(sys))), "out")
    })
}

/// Serializes a system; release the string with [`ifsp_string_free`].
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_to_json(sys: *const IfspSystem, out: *mut *mut c_char) -> IfspStatus {
    guard(|| {
        let json = borrow(sys, "sys")?.0.to_json()?;
        let c = CString::new(json).map_err(|e| Failure(IfspStatus::Integrity, e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ifsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_free(sys: *mut IfspSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of maps, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_len(sys: *const IfspSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.len())
}

/// Applies map `index` (1-based) to `x`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_system_apply(
    sys: *const IfspSystem,
    index: usize,
    x: f64,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let v = borrow(sys, "sys")?.0.apply(index, x)?.value;
        write(out, v, "out")
    })
}

/// Runs `steps` forward steps from `x0` on stream `(seed, stream_index)`.
/// `states` receives `steps + 1` values; `indices`, if not null, receives the
/// `steps` 1-based map indices.
///
/// # Safety
/// `sys` must be a live handle; the buffers must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ifsp_simulate_forward(
    sys: *const IfspSystem,
    x0: f64,
    steps: usize,
    seed: u64,
    stream_index: u64,
    states: *mut f64,
    indices: *mut u32,
) -> IfspStatus {
    guard(|| {
        let sys = &borrow(sys, "sys")?.0;
        let states = buffer(states, steps + 1, "states")?;
        let traj = simulate_forward(sys, x0, steps, &mut RngStream::new(seed, stream_index))?;
        states.copy_from_slice(&traj.states);
        if !indices.is_null() {
            let indices = buffer(indices, steps, "indices")?;
            for (dst, &i) in indices.iter_mut().zip(&traj.indices) {
                *dst = i as u32;
            }
        }
        Ok(())
    })
}

/// `count` independent reversed iterates of depth `depth`; sample `j` uses
/// stream `(seed, j)`. `out` receives `count` values.
///
/// # Safety
/// `sys` must be a live handle; `out` must hold `count` values.
#[no_mangle]
pub unsafe extern "C" fn ifsp_backward_batch(
    sys: *const IfspSystem,
    x0: f64,
    depth: usize,
    count: usize,
    seed: u64,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let sys = &borrow(sys, "sys")?.0;
        let out = buffer(out, count, "out")?;
        let batch = backward_sample_batch(sys, x0, depth, count, seed)?;
        out.copy_from_slice(&batch.values);
        Ok(())
    })
}

/// Exact one-sample KS distance of `len` samples to `dist`.
///
/// # Safety
/// `samples` must hold `len` values; `dist` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ifsp_ks_distance(
    samples: *const f64,
    len: usize,
    dist: *const IfspDistribution,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let samples = slice(samples, len, "samples")?;
        let v = ks_distance(samples, &borrow(dist, "dist")?.0)?;
        write(out, v, "out")
    })
}

/// One-step stationarity distance of `sys` against `dist` on a grid of
/// `grid_size` quantile midpoints.
///
/// # Safety
/// `sys` and `dist` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ifsp_one_step_distance(
    sys: *const IfspSystem,
    dist: *const IfspDistribution,
    grid_size: usize,
    out: *mut f64,
) -> IfspStatus {
    guard(|| {
        let r = one_step_stationarity(&borrow(sys, "sys")?.0, &borrow(dist, "dist")?.0, grid_size, 0.01)?;
        write(out, r.statistic, "out")
    })
}
