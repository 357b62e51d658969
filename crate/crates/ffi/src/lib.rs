//! C ABI over `gevrey-core`.
//!
//! Objects cross the boundary as opaque handles created by `gv_*_new` style
//! constructors and released with the matching `gv_*_free`. Every fallible
//! call returns a [`GvStatus`] and writes its result through an out pointer;
//! on failure the message is kept per thread and can be read back with
//! [`gv_last_error_message`]. Panics are caught and reported as
//! [`GvStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use gevrey_core::lab::{check_commutator_bound, BoundVariant};
use gevrey_core::profiles;
use gevrey_core::solver::{energy_e0, evolve, SolverConfig, Trajectory, WaveState};
use gevrey_core::spectral::{gevrey_norm, gradient_norm, make_grid, Complex64, GevreyIndex, Grid, PhysicalField};
use gevrey_core::tracker::{modified_energy, radius_by_energy, radius_by_slope, theoretical_bound};
use gevrey_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GridMismatch = 3,
    /// `sigma * max|xi|` beyond the overflow guard.
    Overflow = 4,
    /// Final time past the wrap-around horizon of the torus.
    Horizon = 5,
    /// Non-finite values during time stepping.
    BlowUp = 6,
    /// Caller buffer too small; the required length is in the error message.
    BufferTooSmall = 7,
    Panic = 8,
}

/// Which exponent placement of the two-dimensional commutator bound.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GvVariant {
    Statement = 0,
    Proof = 1,
}

/// Periodic grid on a centered torus.
pub struct GvGrid(Arc<Grid>);

/// Complex field sampled on a grid.
pub struct GvField(PhysicalField);

/// Cauchy data `(u, u_t)` at one time.
pub struct GvState(WaveState);

/// Recorded states of a time integration.
pub struct GvTrajectory(Trajectory);

enum Failure {
    Null(&'static str),
    Buffer { need: usize, got: usize },
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> GvStatus {
        match self {
            Failure::Null(_) => GvStatus::NullPointer,
            Failure::Buffer { .. } => GvStatus::BufferTooSmall,
            Failure::Core(e) => match e {
                Error::GridMismatch => GvStatus::GridMismatch,
                Error::Overflow { .. } => GvStatus::Overflow,
                Error::Horizon { .. } => GvStatus::Horizon,
                Error::BlowUp { .. } => GvStatus::BlowUp,
                _ => GvStatus::InvalidArgument,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Null(what) => format!("null pointer: {what}"),
            Failure::Buffer { need, got } => format!("buffer holds {got} entries, need {need}"),
            Failure::Core(e) => e.to_string(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GvStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message());
            fail.status()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            GvStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn solver_config(p: u32, dt: f64) -> Result<SolverConfig, Failure> {
    Ok(SolverConfig::new(p, dt)?)
}

/// Length in bytes of the last error message on this thread, including the
/// terminating NUL; 0 if there is none.
#[no_mangle]
pub extern "C" fn gv_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes_with_nul().len()))
}

/// Copy the last error message into `buf` as a NUL-terminated string.
///
/// # Safety
/// `buf` must be valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn gv_last_error_message(buf: *mut c_char, len: usize) -> GvStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone()).unwrap_or_default();
    let bytes = msg.as_bytes_with_nul();
    if buf.is_null() {
        return GvStatus::NullPointer;
    }
    if len < bytes.len() {
        return GvStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
    GvStatus::Ok
}

/// Cubic grid: `points` nodes per axis on `[-extent/2, extent/2)^dim`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gv_grid_new(dim: usize, extent: f64, points: usize, out: *mut *mut GvGrid) -> GvStatus {
    guard(|| put(out, boxed(GvGrid(make_grid(dim, extent, points)?)), "out"))
}

/// # Safety
/// `grid` must come from [`gv_grid_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn gv_grid_free(grid: *mut GvGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Total number of nodes, the length of every field buffer on this grid.
///
/// # Safety
/// `grid` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn gv_grid_len(grid: *const GvGrid, out: *mut usize) -> GvStatus {
    guard(|| put(out, get(grid, "grid")?.0.len(), "out"))
}

/// Field from real samples in row-major order, last axis fastest.
///
/// # Safety
/// `values` must hold `len` doubles; `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_field_from_real(
    grid: *const GvGrid,
    values: *const f64,
    len: usize,
    out: *mut *mut GvField,
) -> GvStatus {
    guard(|| {
        let g = get(grid, "grid")?.0.clone();
        let v = slice(values, len, "values")?;
        let f = PhysicalField::new(g, v.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
        put(out, boxed(GvField(f)), "out")
    })
}

/// Field from separate real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles; `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_field_from_complex(
    grid: *const GvGrid,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut GvField,
) -> GvStatus {
    guard(|| {
        let g = get(grid, "grid")?.0.clone();
        let (re, im) = (slice(re, len, "re")?, slice(im, len, "im")?);
        let v = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        put(out, boxed(GvField(PhysicalField::new(g, v)?)), "out")
    })
}

/// Gaussian `amplitude * exp(-|x|^2 / (2 width^2))`.
///
/// # Safety
/// `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_field_gaussian(
    grid: *const GvGrid,
    amplitude: f64,
    width: f64,
    out: *mut *mut GvField,
) -> GvStatus {
    guard(|| {
        let g = get(grid, "grid")?.0.clone();
        put(out, boxed(GvField(profiles::gaussian(g, amplitude, width))), "out")
    })
}

/// Product of `sech(pi x_a / (2 radius))`, analytic in a strip of half-width `radius`.
///
/// # Safety
/// `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_field_sech(
    grid: *const GvGrid,
    amplitude: f64,
    radius: f64,
    out: *mut *mut GvField,
) -> GvStatus {
    guard(|| {
        let g = get(grid, "grid")?.0.clone();
        put(out, boxed(GvField(profiles::sech(g, amplitude, radius))), "out")
    })
}

/// Periodized Poisson kernel; coefficients decay exactly like `e^{-radius |xi|}`.
///
/// # Safety
/// `grid` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_field_poisson(grid: *const GvGrid, radius: f64, out: *mut *mut GvField) -> GvStatus {
    guard(|| {
        let g = get(grid, "grid")?.0.clone();
        put(out, boxed(GvField(profiles::poisson_kernel(g, radius))), "out")
    })
}

/// Copy the samples out. Either of `re`, `im` may be null to skip it.
///
/// # Safety
/// Non-null `re`, `im` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gv_field_values(field: *const GvField, re: *mut f64, im: *mut f64, len: usize) -> GvStatus {
    guard(|| {
        let values = get(field, "field")?.0.values();
        if len < values.len() {
            return Err(Failure::Buffer {
                need: values.len(),
                got: len,
            });
        }
        for (i, z) in values.iter().enumerate() {
            if !re.is_null() {
                *re.add(i) = z.re;
            }
            if !im.is_null() {
                *im.add(i) = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `field` must come from a `gv_field_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn gv_field_free(field: *mut GvField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// `||f||_{G^{sigma,s}}`.
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_gevrey_norm(field: *const GvField, sigma: f64, s: f64, out: *mut f64) -> GvStatus {
    guard(|| {
        let n = gevrey_norm(&get(field, "field")?.0, GevreyIndex::new(sigma, s)?)?;
        put(out, n, "out")
    })
}

/// `||nabla f||_{G^{sigma,s}}`.
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_gradient_norm(field: *const GvField, sigma: f64, s: f64, out: *mut f64) -> GvStatus {
    guard(|| {
        let n = gradient_norm(&get(field, "field")?.0, GevreyIndex::new(sigma, s)?)?;
        put(out, n, "out")
    })
}

/// Commutator bound check: writes `||L f||_{L^2}` and the bound's right-hand side.
/// `variant` only matters in two dimensions.
///
/// # Safety
/// `field`, `lhs` and `rhs` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_commutator_check(
    field: *const GvField,
    sigma: f64,
    p: u32,
    theta: f64,
    variant: GvVariant,
    lhs: *mut f64,
    rhs: *mut f64,
) -> GvStatus {
    guard(|| {
        let v = match variant {
            GvVariant::Statement => BoundVariant::Statement,
            GvVariant::Proof => BoundVariant::Proof,
        };
        let r = check_commutator_bound(&get(field, "field")?.0, sigma, p, theta, v)?;
        put(lhs, r.lhs, "lhs")?;
        put(rhs, r.rhs, "rhs")
    })
}

/// Wave state from position `u` and velocity `v` at `time`. The fields are copied.
///
/// # Safety
/// `u`, `v` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_state_new(
    u: *const GvField,
    v: *const GvField,
    time: f64,
    out: *mut *mut GvState,
) -> GvStatus {
    guard(|| {
        let s = WaveState::new(get(u, "u")?.0.clone(), get(v, "v")?.0.clone(), time)?;
        put(out, boxed(GvState(s)), "out")
    })
}

/// # Safety
/// `state` must come from a `gv_state_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn gv_state_free(state: *mut GvState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_state_time(state: *const GvState, out: *mut f64) -> GvStatus {
    guard(|| put(out, get(state, "state")?.0.time, "out"))
}

/// New field handle holding a copy of the position `u`.
///
/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_state_position(state: *const GvState, out: *mut *mut GvField) -> GvStatus {
    guard(|| put(out, boxed(GvField(get(state, "state")?.0.u.clone())), "out"))
}

/// Conserved energy of the defocusing equation with power `p`.
///
/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_energy(state: *const GvState, p: u32, out: *mut f64) -> GvStatus {
    guard(|| {
        let cfg = solver_config(p, 1.0)?;
        put(out, energy_e0(&get(state, "state")?.0, &cfg), "out")
    })
}

/// Energy of the amplified pair `e^{sigma|D|}(u, u_t)`.
///
/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_modified_energy(state: *const GvState, sigma: f64, p: u32, out: *mut f64) -> GvStatus {
    guard(|| {
        let cfg = solver_config(p, 1.0)?;
        put(out, modified_energy(&get(state, "state")?.0, sigma, &cfg)?.energy, "out")
    })
}

/// Strang-split integration to `t_final`, recording every `record_every` steps.
///
/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_evolve(
    state: *const GvState,
    t_final: f64,
    p: u32,
    dt: f64,
    record_every: usize,
    out: *mut *mut GvTrajectory,
) -> GvStatus {
    guard(|| {
        let cfg = solver_config(p, dt)?;
        let tr = evolve(&get(state, "state")?.0, t_final, &cfg, record_every)?;
        put(out, boxed(GvTrajectory(tr)), "out")
    })
}

/// # Safety
/// `trajectory` must come from [`gv_evolve`] or be null.
#[no_mangle]
pub unsafe extern "C" fn gv_trajectory_free(trajectory: *mut GvTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// # Safety
/// `trajectory` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_trajectory_len(trajectory: *const GvTrajectory, out: *mut usize) -> GvStatus {
    guard(|| put(out, get(trajectory, "trajectory")?.0.len(), "out"))
}

/// New state handle holding a copy of record `index`.
///
/// # Safety
/// `trajectory` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_trajectory_state(
    trajectory: *const GvTrajectory,
    index: usize,
    out: *mut *mut GvState,
) -> GvStatus {
    guard(|| {
        let tr = &get(trajectory, "trajectory")?.0;
        let s = tr.states.get(index).ok_or_else(|| {
            Error::invalid(format!("record {index} out of range for {} records", tr.len()))
        })?;
        put(out, boxed(GvState(s.clone())), "out")
    })
}

/// Energy-based radius of analyticity at recorded time `t`: the largest
/// `sigma <= sigma_max` whose modified energy stays within bound up to `t`.
/// `saturated` is set to 1 when the search hit `sigma_max`.
///
/// # Safety
/// `trajectory`, `sigma_star` and `saturated` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_radius_by_energy(
    trajectory: *const GvTrajectory,
    t: f64,
    sigma_max: f64,
    tol: f64,
    sigma_star: *mut f64,
    saturated: *mut i32,
) -> GvStatus {
    guard(|| {
        let e = radius_by_energy(&get(trajectory, "trajectory")?.0, t, sigma_max, tol)?;
        put(sigma_star, e.sigma_star, "sigma_star")?;
        put(saturated, e.saturated as i32, "saturated")
    })
}

/// Exponential decay rate of the Fourier coefficients fitted on `[xi_lo, xi_hi]`.
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_radius_by_slope(field: *const GvField, xi_lo: f64, xi_hi: f64, out: *mut f64) -> GvStatus {
    guard(|| put(out, radius_by_slope(&get(field, "field")?.0, (xi_lo, xi_hi))?, "out"))
}

/// Guaranteed lower bound on the radius at time `t`. Pass NaN for `eps`
/// when `d = 1`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gv_theoretical_bound(
    t: f64,
    p: u32,
    d: usize,
    sigma0: f64,
    c: f64,
    eps: f64,
    out: *mut f64,
) -> GvStatus {
    guard(|| {
        let eps = (!eps.is_nan()).then_some(eps);
        put(out, theoretical_bound(t, p, d, sigma0, c, eps)?, "out")
    })
}
