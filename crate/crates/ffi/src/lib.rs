//! C ABI over `scalekit`.
//!
//! Distributions are opaque `ScalekitDistribution` handles released with
//! [`scalekit_distribution_free`]. Every fallible call returns a
//! [`ScalekitStatus`]; the message of the last failure on the calling thread
//! is available from [`scalekit_last_error_message`]. Panics never cross the
//! boundary and come back as `SCALEKIT_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use scalekit::catalog::{self, Params};
use scalekit::maxent::{self, DistributionSpec, GridDistribution};
use scalekit::transforms::{self, LevyGrid};
use scalekit::{sim, Error, ErrorKind};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalekitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    Panic = 4,
    DomainError = 10,
    DivergentIntegral = 11,
    DegenerateInput = 12,
    NoBracket = 13,
    InfeasibleConstraint = 14,
    UnknownDistribution = 15,
    ParameterOutOfDomain = 16,
    NonMonotoneMap = 17,
    GridTooNarrow = 18,
    RingingExceedsTolerance = 19,
    RenormalizationDrift = 20,
    InvalidSpec = 21,
    UnknownScenario = 22,
    Malformed = 23,
    Io = 24,
}

impl From<ErrorKind> for ScalekitStatus {
    fn from(k: ErrorKind) -> Self {
        match k {
            ErrorKind::DomainError => ScalekitStatus::DomainError,
            ErrorKind::DivergentIntegral => ScalekitStatus::DivergentIntegral,
            ErrorKind::DegenerateInput => ScalekitStatus::DegenerateInput,
            ErrorKind::NoBracket => ScalekitStatus::NoBracket,
            ErrorKind::InfeasibleConstraint => ScalekitStatus::InfeasibleConstraint,
            ErrorKind::UnknownDistribution => ScalekitStatus::UnknownDistribution,
            ErrorKind::ParameterOutOfDomain => ScalekitStatus::ParameterOutOfDomain,
            ErrorKind::NonMonotoneMap => ScalekitStatus::NonMonotoneMap,
            ErrorKind::GridTooNarrow => ScalekitStatus::GridTooNarrow,
            ErrorKind::RingingExceedsTolerance => ScalekitStatus::RingingExceedsTolerance,
            ErrorKind::RenormalizationDrift => ScalekitStatus::RenormalizationDrift,
            ErrorKind::InvalidSpec => ScalekitStatus::InvalidSpec,
            ErrorKind::UnknownScenario => ScalekitStatus::UnknownScenario,
            ErrorKind::Malformed => ScalekitStatus::Malformed,
            ErrorKind::Io => ScalekitStatus::Io,
        }
    }
}

/// A normalized density on a grid.
pub struct ScalekitDistribution {
    inner: GridDistribution,
}

/// Result of fitting a scenario against its predicted law.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalekitFit {
    pub ks_statistic: f64,
    pub threshold: f64,
    pub sample_count: usize,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Fail {
    Status(ScalekitStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Status(e.kind().into(), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ScalekitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            ScalekitStatus::Ok
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            ScalekitStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(ScalekitStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(ScalekitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_params(names: *const *const c_char, values: *const f64, count: usize) -> Result<Params, Fail> {
    let mut params = Params::new();
    if count == 0 {
        return Ok(params);
    }
    if names.is_null() || values.is_null() {
        return Err(null("parameter arrays"));
    }
    for i in 0..count {
        let name = read_str(*names.add(i), "parameter name")?;
        params.insert(name.to_string(), *values.add(i));
    }
    Ok(params)
}

unsafe fn handle<'a>(h: *const ScalekitDistribution) -> Result<&'a GridDistribution, Fail> {
    h.as_ref().map(|d| &d.inner).ok_or_else(|| null("distribution handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = v;
    Ok(())
}

fn boxed(d: GridDistribution) -> *mut ScalekitDistribution {
    Box::into_raw(Box::new(ScalekitDistribution { inner: d }))
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
#[no_mangle]
pub unsafe extern "C" fn scalekit_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Number of catalog entries.
#[no_mangle]
pub extern "C" fn scalekit_catalog_len() -> usize {
    catalog::entries().len()
}

/// Name of catalog entry `index` as a static NUL-terminated string, or null
/// when out of range.
#[no_mangle]
pub extern "C" fn scalekit_catalog_name(index: usize) -> *const c_char {
    static NAMES: std::sync::OnceLock<Vec<std::ffi::CString>> = std::sync::OnceLock::new();
    let names = NAMES.get_or_init(|| {
        catalog::names()
            .into_iter()
            .map(|n| std::ffi::CString::new(n).expect("catalog names have no NUL"))
            .collect()
    });
    names.get(index).map_or(ptr::null(), |c| c.as_ptr())
}

/// Normalize catalog entry `name` with `count` named parameters.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_from_catalog(
    name: *const c_char,
    param_names: *const *const c_char,
    param_values: *const f64,
    count: usize,
    out: *mut *mut ScalekitDistribution,
) -> ScalekitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let params = read_params(param_names, param_values, count)?;
        let d = catalog::distribution(name, &params)?;
        *out = boxed(d);
        Ok(())
    })
}

/// Normalize a `DistributionSpec` given as JSON.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_from_spec_json(
    json: *const c_char,
    out: *mut *mut ScalekitDistribution,
) -> ScalekitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let spec: DistributionSpec = serde_json::from_str(text).map_err(Error::from)?;
        spec.validate()?;
        *out = boxed(maxent::normalize(&spec)?);
        Ok(())
    })
}

/// Symmetric stable density with characteristic function `e^{-phi |x|^gamma}`.
/// `points = 0` or `half_width <= 0` selects the default layout.
#[no_mangle]
pub unsafe extern "C" fn scalekit_levy_stable(
    gamma: f64,
    phi: f64,
    points: usize,
    half_width: f64,
    out: *mut *mut ScalekitDistribution,
) -> ScalekitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let def = LevyGrid::default();
        let layout = LevyGrid {
            points: if points == 0 { def.points } else { points },
            half_width: if half_width > 0.0 { half_width } else { def.half_width },
        };
        *out = boxed(transforms::levy_stable_density(gamma, phi, layout)?);
        Ok(())
    })
}

/// Release a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_free(dist: *mut ScalekitDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of grid points, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_len(dist: *const ScalekitDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.inner.len())
}

/// Copy grid and density into caller buffers of `capacity` values each.
/// Either buffer may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_table(
    dist: *const ScalekitDistribution,
    grid: *mut f64,
    density: *mut f64,
    capacity: usize,
) -> ScalekitStatus {
    guard(|| {
        let d = handle(dist)?;
        if capacity < d.len() {
            return Err(Fail::Status(
                ScalekitStatus::BufferTooSmall,
                format!("need {} values, got {capacity}", d.len()),
            ));
        }
        if !grid.is_null() {
            ptr::copy_nonoverlapping(d.grid.as_ptr(), grid, d.len());
        }
        if !density.is_null() {
            ptr::copy_nonoverlapping(d.density.as_ptr(), density, d.len());
        }
        Ok(())
    })
}

/// Density at `y`.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_density_at(
    dist: *const ScalekitDistribution,
    y: f64,
    out: *mut f64,
) -> ScalekitStatus {
    guard(|| put(out, handle(dist)?.density_at(y)))
}

/// Normalization constant `psi` and the reported quadrature error.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_normalization(
    dist: *const ScalekitDistribution,
    psi: *mut f64,
    quadrature_error: *mut f64,
) -> ScalekitStatus {
    guard(|| {
        let d = handle(dist)?;
        put(psi, d.psi)?;
        put(quadrature_error, d.quadrature_error)
    })
}

/// Differential entropy.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_entropy(dist: *const ScalekitDistribution, out: *mut f64) -> ScalekitStatus {
    guard(|| put(out, maxent::entropy(handle(dist)?)?))
}

/// Laplace transform `E[e^{-sY}]` of a density on `y >= 0`.
#[no_mangle]
pub unsafe extern "C" fn scalekit_distribution_laplace(
    dist: *const ScalekitDistribution,
    s: f64,
    out: *mut f64,
) -> ScalekitStatus {
    guard(|| put(out, transforms::laplace_at(handle(dist)?, s)?))
}

/// Compare a catalog recipe with its closed form.
#[no_mangle]
pub unsafe extern "C" fn scalekit_verify_entry(
    name: *const c_char,
    param_names: *const *const c_char,
    param_values: *const f64,
    count: usize,
    max_relerr: *mut f64,
    pass: *mut bool,
) -> ScalekitStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let params = read_params(param_names, param_values, count)?;
        let r = catalog::verify_entry(name, &params)?;
        put(max_relerr, r.max_pointwise_relerr)?;
        put(pass, r.pass)
    })
}

/// Simulate a shipped scenario and fit it against its predicted law.
#[no_mangle]
pub unsafe extern "C" fn scalekit_run_scenario(
    name: *const c_char,
    sample_count: usize,
    seed: u64,
    out: *mut ScalekitFit,
) -> ScalekitStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let r = sim::run_scenario_with(name, sample_count, seed)?.fit;
        put(
            out,
            ScalekitFit {
                ks_statistic: r.ks_statistic,
                threshold: r.threshold,
                sample_count: r.sample_count,
                pass: r.pass,
            },
        )
    })
}
