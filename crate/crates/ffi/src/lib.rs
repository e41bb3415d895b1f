//! C ABI for the zeno-ring simulator.
//!
//! The surface follows the usual opaque-handle pattern: `zr_system_new`
//! allocates a parameter handle, every computation takes it by pointer and
//! writes results through out-pointers, and all functions return a
//! [`ZrStatus`] code. Nothing unwinds across the boundary.

use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use zeno_ring::boson::{self, CoherentVariant, FockBase};
use zeno_ring::dynamics::{self, MeasurementSchedule};
use zeno_ring::error::Error;
use zeno_ring::model::{dispersion, Statistics, SystemParams};
use zeno_ring::rates;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfBand = 3,
    NumericalFailure = 4,
    Panic = 5,
}

/// Rate methods selectable through [`zr_rate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZrRateMethod {
    DerivedSinc = 0,
    TimeIntegral = 1,
    PaperSinc = 2,
    GoldenRuleBroadened = 3,
    GoldenRuleContinuum = 4,
    WignerWeisskopf = 5,
}

/// Opaque handle over the validated system parameters.
pub struct ZrSystem {
    params: SystemParams,
}

fn status_of(e: &Error) -> ZrStatus {
    match e {
        Error::InvalidParameter(_) | Error::InvalidArgument(_) => ZrStatus::InvalidArgument,
        Error::OutOfBand(_) => ZrStatus::OutOfBand,
        _ => ZrStatus::NumericalFailure,
    }
}

fn guarded(f: impl FnOnce() -> ZrStatus) -> ZrStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ZrStatus::Panic)
}

/// Allocates a system handle. `statistics` is 0 for fermions, 1 for bosons.
/// On success writes the handle through `out` and returns `Ok`; the handle
/// must be released with [`zr_system_free`].
///
/// # Safety
/// `out`, when non-null, must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn zr_system_new(
    half_count: usize,
    hopping: f64,
    coupling: f64,
    onsite: f64,
    flux: f64,
    statistics: c_int,
    out: *mut *mut ZrSystem,
) -> ZrStatus {
    guarded(|| {
        if out.is_null() {
            return ZrStatus::NullPointer;
        }
        let statistics = match statistics {
            0 => Statistics::Fermion,
            1 => Statistics::Boson,
            _ => return ZrStatus::InvalidArgument,
        };
        match SystemParams::new(half_count, hopping, coupling, onsite, flux, statistics) {
            Ok(params) => {
                let handle = Box::new(ZrSystem { params });
                unsafe { *out = Box::into_raw(handle) };
                ZrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle from [`zr_system_new`]. A null pointer is a no-op.
///
/// # Safety
/// `system` must be a pointer previously returned by [`zr_system_new`] and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zr_system_free(system: *mut ZrSystem) {
    if !system.is_null() {
        drop(unsafe { Box::from_raw(system) });
    }
}

unsafe fn params_of<'a>(system: *const ZrSystem) -> Option<&'a SystemParams> {
    unsafe { system.as_ref() }.map(|s| &s.params)
}

/// Band energy of ring mode `k`, written through `out`.
///
/// # Safety
/// `system` must be a live handle from [`zr_system_new`]; `out` must point to
/// writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn zr_dispersion(
    system: *const ZrSystem,
    mode: usize,
    out: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        if out.is_null() {
            return ZrStatus::NullPointer;
        }
        match dispersion(params, mode) {
            Ok(value) => {
                unsafe { *out = value };
                ZrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Decay rate by the selected method at measurement interval `tau`
/// (ignored by the interval-independent methods).
///
/// # Safety
/// `system` must be a live handle; `out` must point to one writable `double`.
#[no_mangle]
pub unsafe extern "C" fn zr_rate(
    system: *const ZrSystem,
    method: ZrRateMethod,
    tau: f64,
    out: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        if out.is_null() {
            return ZrStatus::NullPointer;
        }
        let outcome = match method {
            ZrRateMethod::DerivedSinc => {
                rates::decay_rate_derived_sinc(params, tau).map(|e| e.value)
            }
            ZrRateMethod::TimeIntegral => {
                rates::decay_rate_time_integral(params, tau).map(|e| e.value)
            }
            ZrRateMethod::PaperSinc => rates::decay_rate_paper_sinc(params, tau).map(|e| e.value),
            ZrRateMethod::GoldenRuleBroadened => {
                rates::golden_rule_broadened(params, rates::default_broadening(params))
                    .map(|e| e.value)
            }
            ZrRateMethod::GoldenRuleContinuum => {
                rates::golden_rule_continuum(params.hopping, params.coupling, params.onsite)
                    .map(|e| e.value)
            }
            ZrRateMethod::WignerWeisskopf => {
                rates::wigner_weisskopf_pole(params).map(|p| p.estimate.value)
            }
        };
        match outcome {
            Ok(value) => {
                unsafe { *out = value };
                ZrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

fn write_survival(
    run: &dynamics::SurvivalResult,
    probabilities: *mut f64,
    len: usize,
    effective_rate: *mut f64,
) -> ZrStatus {
    if len != run.probabilities.len() {
        return ZrStatus::InvalidArgument;
    }
    if !probabilities.is_null() {
        let out = unsafe { std::slice::from_raw_parts_mut(probabilities, len) };
        out.copy_from_slice(&run.probabilities);
    }
    if !effective_rate.is_null() {
        unsafe { *effective_rate = run.effective_rate };
    }
    ZrStatus::Ok
}

/// Survival series for a single particle on the dot under `repetitions`
/// measurements spaced `tau` apart. `probabilities` may be null or point to
/// `repetitions + 1` doubles (index 0 is the initial unit probability).
///
/// # Safety
/// `system` must be a live handle; `probabilities`, when non-null, must have
/// room for `probabilities_len` doubles with
/// `probabilities_len == repetitions + 1`.
#[no_mangle]
pub unsafe extern "C" fn zr_measured_survival(
    system: *const ZrSystem,
    tau: f64,
    repetitions: usize,
    probabilities: *mut f64,
    probabilities_len: usize,
    effective_rate: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        let run = MeasurementSchedule::new(tau, repetitions)
            .and_then(|s| dynamics::measured_survival(params, &s));
        match run {
            Ok(run) => write_survival(&run, probabilities, probabilities_len, effective_rate),
            Err(e) => status_of(&e),
        }
    })
}

/// Survival series for an n-boson Fock stack on the dot.
///
/// # Safety
/// Same contract as [`zr_measured_survival`].
#[no_mangle]
pub unsafe extern "C" fn zr_fock_survival(
    system: *const ZrSystem,
    occupation: usize,
    tau: f64,
    repetitions: usize,
    probabilities: *mut f64,
    probabilities_len: usize,
    effective_rate: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        let run = MeasurementSchedule::new(tau, repetitions)
            .and_then(|s| dynamics::fock_survival(params, occupation, &s));
        match run {
            Ok(run) => write_survival(&run, probabilities, probabilities_len, effective_rate),
            Err(e) => status_of(&e),
        }
    })
}

/// Exact survival series for a coherent state of amplitude
/// `alpha_re + i alpha_im` on the dot.
///
/// # Safety
/// Same contract as [`zr_measured_survival`].
#[no_mangle]
pub unsafe extern "C" fn zr_coherent_survival(
    system: *const ZrSystem,
    alpha_re: f64,
    alpha_im: f64,
    tau: f64,
    repetitions: usize,
    probabilities: *mut f64,
    probabilities_len: usize,
    effective_rate: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        let alpha = Complex64::new(alpha_re, alpha_im);
        let run = MeasurementSchedule::new(tau, repetitions)
            .and_then(|s| dynamics::coherent_survival_oracle(params, alpha, &s));
        match run {
            Ok(run) => write_survival(&run, probabilities, probabilities_len, effective_rate),
            Err(e) => status_of(&e),
        }
    })
}

/// Published coherent-state rate; `four_cos` selects the 4-cos coefficient
/// variant. Writes the literal rate and the exact oracle rate.
///
/// # Safety
/// `system` must be a live handle; out-pointers, when non-null, must each
/// point to one writable `double`.
#[no_mangle]
pub unsafe extern "C" fn zr_coherent_rate_paper(
    system: *const ZrSystem,
    alpha_re: f64,
    alpha_im: f64,
    tau: f64,
    four_cos: bool,
    out_paper: *mut f64,
    out_oracle: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        let variant = if four_cos {
            CoherentVariant::FourCos
        } else {
            CoherentVariant::TwoCos
        };
        match boson::coherent_rate_paper(params, Complex64::new(alpha_re, alpha_im), tau, variant) {
            Ok(report) => {
                if !out_paper.is_null() {
                    unsafe { *out_paper = report.paper.value };
                }
                if !out_oracle.is_null() {
                    unsafe { *out_oracle = report.oracle_rate };
                }
                ZrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// n-boson Fock rate on the flux-free ring; `paper_base` selects the literal
/// sinc-sum prefactor instead of the derived one.
///
/// # Safety
/// `system` must be a live handle; `out` must point to one writable `double`.
#[no_mangle]
pub unsafe extern "C" fn zr_fock_rate(
    system: *const ZrSystem,
    occupation: usize,
    tau: f64,
    paper_base: bool,
    out: *mut f64,
) -> ZrStatus {
    guarded(|| {
        let Some(params) = (unsafe { params_of(system) }) else {
            return ZrStatus::NullPointer;
        };
        if out.is_null() {
            return ZrStatus::NullPointer;
        }
        let base = if paper_base {
            FockBase::PaperSinc
        } else {
            FockBase::TimeIntegral
        };
        match boson::fock_rate(params, occupation, tau, base) {
            Ok(estimate) => {
                unsafe { *out = estimate.value };
                ZrStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn zr_status_message(status: ZrStatus) -> *const c_char {
    let bytes: &'static [u8] = match status {
        ZrStatus::Ok => b"ok\0",
        ZrStatus::NullPointer => b"null pointer\0",
        ZrStatus::InvalidArgument => b"invalid argument\0",
        ZrStatus::OutOfBand => b"dot level out of the ring band\0",
        ZrStatus::NumericalFailure => b"numerical failure\0",
        ZrStatus::Panic => b"internal panic\0",
    };
    bytes.as_ptr() as *const c_char
}

/// Static, NUL-terminated crate version string.
#[no_mangle]
pub extern "C" fn zr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
