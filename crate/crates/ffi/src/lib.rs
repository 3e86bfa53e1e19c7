//! C ABI over the `roughfilm` solver.
//!
//! Every entry point returns an [`RfStatus`]; results travel through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`rf_last_error`]. Scenarios and solutions are opaque handles that the
//! caller releases with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use roughfilm::cli;
use roughfilm::postprocess::{compare_fields, velocity_profile};
use roughfilm::solver::solve_scenario;
use roughfilm::{coeff_a, coeff_b, load_config, Error, PressureSolution, ScenarioConfig};

/// Status code returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments, configuration text or buffer sizes were rejected.
    InvalidInput = 2,
    /// The solve or a quadrature failed numerically.
    Numerical = 3,
    Io = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// Scenario configuration handle.
pub struct RfScenario(ScenarioConfig);

/// Solved pressure field handle.
pub struct RfSolution(PressureSolution);

/// Norms of the rough-minus-smooth pressure difference.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RfComparison {
    pub l2: f64,
    pub linf: f64,
    pub l2_outside_rough: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(RfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => RfStatus::Io,
            e if e.is_numerical() => RfStatus::Numerical,
            _ => RfStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<cli::CliError> for Failure {
    fn from(e: cli::CliError) -> Self {
        match e {
            cli::CliError::Core(e) => e.into(),
            other => Failure(RfStatus::InvalidInput, other.to_string()),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(RfStatus::InvalidInput, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RfStatus::Internal
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(RfStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

unsafe fn utf8<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{name}` is not valid UTF-8")))
}

/// Message of the last failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Poiseuille and Couette coefficients for roughness intensity `n`.
///
/// # Safety
/// `a` and `b` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_coefficients(n: f64, a: *mut f64, b: *mut f64) -> RfStatus {
    guard(|| {
        non_null(a, "a")?;
        non_null(b, "b")?;
        let (va, vb) = (coeff_a(n)?, coeff_b(n)?);
        *a = va;
        *b = vb;
        Ok(())
    })
}

/// Through-gap velocity profile at `z_count + 1` equally spaced heights.
///
/// Writes `(z, ux, uy)` triples into `out`, which must hold
/// `3 * (z_count + 1)` values.
///
/// # Safety
/// `grad_p` and `u_b` must point to two doubles; `out` must be valid for
/// `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rf_velocity_profile(
    h1: f64,
    n: f64,
    grad_p: *const f64,
    u_b: *const f64,
    z_count: usize,
    out: *mut f64,
    out_len: usize,
) -> RfStatus {
    guard(|| {
        non_null(grad_p, "grad_p")?;
        non_null(u_b, "u_b")?;
        non_null(out, "out")?;
        let needed = z_count
            .checked_add(1)
            .and_then(|k| k.checked_mul(3))
            .ok_or_else(|| invalid("z_count too large"))?;
        if out_len < needed {
            return Err(invalid(format!("output buffer holds {out_len} values, {needed} needed")));
        }
        let gp = [*grad_p, *grad_p.add(1)];
        let ub = [*u_b, *u_b.add(1)];
        let profile = velocity_profile(h1, n, gp, ub, z_count)?;
        let out = std::slice::from_raw_parts_mut(out, needed);
        for (k, (z, u)) in profile.z.iter().zip(&profile.u).enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(&[*z, u[0], u[1]]);
        }
        Ok(())
    })
}

/// Parses a `key = value` configuration document into a new scenario.
///
/// Relative table paths resolve against the working directory.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_from_config(text: *const c_char, out: *mut *mut RfScenario) -> RfStatus {
    guard(|| {
        non_null(out, "out")?;
        let config = load_config(utf8(text, "text")?)?;
        *out = Box::into_raw(Box::new(RfScenario(config)));
        Ok(())
    })
}

/// Creates a scenario from a built-in preset (`fig2` .. `fig5`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_from_preset(name: *const c_char, out: *mut *mut RfScenario) -> RfStatus {
    guard(|| {
        non_null(out, "out")?;
        let config = cli::preset(utf8(name, "name")?)?;
        *out = Box::into_raw(Box::new(RfScenario(config)));
        Ok(())
    })
}

/// Overrides the grid resolution of a scenario.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_set_grid(scenario: *mut RfScenario, nx: usize, ny: usize) -> RfStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        let mut config = (*scenario).0.clone();
        config.nx = nx;
        config.ny = ny;
        config.validate()?;
        (*scenario).0 = config;
        Ok(())
    })
}

/// Releases a scenario. Null is ignored.
///
/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rf_scenario_free(scenario: *mut RfScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Solves the pressure equation for a scenario.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_solve(scenario: *const RfScenario, out: *mut *mut RfSolution) -> RfStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        non_null(out, "out")?;
        let run = solve_scenario(&(*scenario).0)?;
        *out = Box::into_raw(Box::new(RfSolution(run.solution)));
        Ok(())
    })
}

/// Grid size and solver statistics of a solution. Any out pointer may be null.
///
/// # Safety
/// `solution` must be a live handle; non-null out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_solution_info(
    solution: *const RfSolution,
    nx: *mut usize,
    ny: *mut usize,
    iterations: *mut usize,
    relative_residual: *mut f64,
) -> RfStatus {
    guard(|| {
        non_null(solution, "solution")?;
        let s = &(*solution).0;
        if !nx.is_null() {
            *nx = s.nx;
        }
        if !ny.is_null() {
            *ny = s.ny;
        }
        if !iterations.is_null() {
            *iterations = s.iterations;
        }
        if !relative_residual.is_null() {
            *relative_residual = s.relative_residual;
        }
        Ok(())
    })
}

/// Copies nodal pressure, row-major with `y` outer, into `buffer`.
///
/// `len` must be at least `(nx + 1) * (ny + 1)`.
///
/// # Safety
/// `solution` must be a live handle; `buffer` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rf_solution_pressure(solution: *const RfSolution, buffer: *mut f64, len: usize) -> RfStatus {
    guard(|| {
        non_null(solution, "solution")?;
        non_null(buffer, "buffer")?;
        let values = &(*solution).0.values;
        if len < values.len() {
            return Err(invalid(format!("buffer holds {len} values, {} needed", values.len())));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
        Ok(())
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rf_solution_free(solution: *mut RfSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Solves a scenario with and without its roughness and compares the fields.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rf_compare(scenario: *const RfScenario, out: *mut RfComparison) -> RfStatus {
    guard(|| {
        non_null(scenario, "scenario")?;
        non_null(out, "out")?;
        let config = &(*scenario).0;
        if config.roughness.is_smooth() {
            return Err(invalid("scenario has no rough region"));
        }
        let smooth = solve_scenario(&config.without_roughness())?;
        let rough = solve_scenario(config)?;
        let r = compare_fields(&smooth.solution, &rough.solution, &rough.grid, &rough.fields)?;
        *out = RfComparison {
            l2: r.l2,
            linf: r.linf,
            l2_outside_rough: r.l2_outside_rough,
        };
        Ok(())
    })
}
