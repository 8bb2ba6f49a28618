//! C ABI for the pco-sim simulator.
//!
//! A simulation is an opaque `PcoSim` handle created from scenario TOML
//! text. Every fallible call returns a `PcoStatus`; on failure the message
//! is available from `pco_last_error_message` on the same thread.
//! Array accessors copy into caller-owned buffers and fail with
//! `PCO_STATUS_BUFFER_TOO_SMALL` when the buffer is shorter than the count.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pco_sim::config::{parse_config_str, Scenario};
use pco_sim::metrics::{arc_series, ArcSeries};
use pco_sim::output::{analyze, write_trace, RunOutcome};
use pco_sim::phase::containing_arc_of;
use pco_sim::{Error, Trace};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidConfig = 3,
    Simulation = 4,
    NotRun = 5,
    BufferTooSmall = 6,
    Io = 7,
    InvalidArgument = 8,
    Panic = 99,
}

/// Summary of a finished run. Absent times and couplings are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcoSyncReport {
    pub synced: bool,
    pub sync_time: f64,
    pub tolerance: f64,
    pub final_lambda: f64,
    pub monotone: bool,
    pub firings: usize,
    pub coupling_records: usize,
    pub min_alpha_effective: f64,
}

struct Finished {
    trace: Trace,
    series: ArcSeries,
    outcome: RunOutcome,
}

/// Opaque simulation handle.
pub struct PcoSim {
    scenario: Scenario,
    finished: Option<Finished>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PcoStatus {
    match e {
        Error::Parse(_)
        | Error::InvalidConfig(_)
        | Error::InvalidGraph(_)
        | Error::InvalidParameter(_)
        | Error::NotStronglyConnected
        | Error::PhaseOutOfRange(_)
        | Error::NonFinitePhase(_)
        | Error::EmptyPhaseVector => PcoStatus::InvalidConfig,
        Error::Io(_) | Error::Csv(_) => PcoStatus::Io,
        _ => PcoStatus::Simulation,
    }
}

fn fail(status: PcoStatus, msg: impl Into<String>) -> PcoStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> PcoStatus) -> PcoStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(PcoStatus::Panic, "internal panic"),
    }
}

fn from_lib(e: Error) -> PcoStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, PcoStatus> {
    if p.is_null() {
        return Err(fail(PcoStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(PcoStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn sim_ref<'a>(sim: *const PcoSim) -> Result<&'a PcoSim, PcoStatus> {
    sim.as_ref().ok_or_else(|| fail(PcoStatus::NullPointer, "null simulation handle"))
}

unsafe fn finished<'a>(sim: *const PcoSim) -> Result<&'a Finished, PcoStatus> {
    sim_ref(sim)?.finished.as_ref().ok_or_else(|| fail(PcoStatus::NotRun, "simulation has not been run"))
}

unsafe fn out_buf<'a, T>(buf: *mut T, len: usize, need: usize) -> Result<&'a mut [T], PcoStatus> {
    if len < need {
        return Err(fail(PcoStatus::BufferTooSmall, format!("buffer holds {len} values, {need} needed")));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if buf.is_null() {
        return Err(fail(PcoStatus::NullPointer, "null output buffer"));
    }
    Ok(std::slice::from_raw_parts_mut(buf, need))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> PcoStatus {
    if out.is_null() {
        return fail(PcoStatus::NullPointer, "null output pointer");
    }
    out.write(value);
    PcoStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parse scenario TOML and create a handle. Relative edge-file paths
/// resolve against the working directory.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_new(toml: *const c_char, out: *mut *mut PcoSim) -> PcoStatus {
    guard(|| {
        if out.is_null() {
            return fail(PcoStatus::NullPointer, "null output pointer");
        }
        out.write(ptr::null_mut());
        let text = tri!(str_arg(toml));
        let scenario = tri!(parse_config_str(text, None).map_err(from_lib));
        out.write(Box::into_raw(Box::new(PcoSim { scenario, finished: None })));
        PcoStatus::Ok
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `sim` must come from `pco_sim_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_free(sim: *mut PcoSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Replace the seed of random initial phases and coupling draws. Discards
/// any previous result.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_set_seed(sim: *mut PcoSim, seed: u64) -> PcoStatus {
    guard(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(PcoStatus::NullPointer, "null simulation handle");
        };
        sim.scenario.override_seed(seed);
        sim.finished = None;
        PcoStatus::Ok
    })
}

/// Run the simulation to its horizon (or early stop).
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_run(sim: *mut PcoSim) -> PcoStatus {
    guard(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(PcoStatus::NullPointer, "null simulation handle");
        };
        let trace = tri!(pco_sim::run(sim.scenario.sim.clone()).map_err(from_lib));
        let series = arc_series(&trace);
        let outcome = analyze(&trace, &series, sim.scenario.sync_tol, sim.scenario.sync_hold);
        sim.finished = Some(Finished { trace, series, outcome });
        PcoStatus::Ok
    })
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_oscillator_count(sim: *const PcoSim, out: *mut usize) -> PcoStatus {
    guard(|| write_out(out, tri!(sim_ref(sim)).scenario.sim.n()))
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_sample_count(sim: *const PcoSim, out: *mut usize) -> PcoStatus {
    guard(|| write_out(out, tri!(finished(sim)).trace.samples.len()))
}

/// Copy sample times (`sample_count` values) and phases (row-major,
/// `sample_count * oscillator_count` values). Either buffer may be null
/// with length 0 to skip it.
///
/// # Safety
/// Buffers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_samples(
    sim: *const PcoSim,
    times: *mut f64,
    times_len: usize,
    phases: *mut f64,
    phases_len: usize,
) -> PcoStatus {
    guard(|| {
        let f = tri!(finished(sim));
        let samples = &f.trace.samples;
        let n = f.trace.n;
        if times_len > 0 || !times.is_null() {
            let buf = tri!(out_buf(times, times_len, samples.len()));
            for (slot, s) in buf.iter_mut().zip(samples) {
                *slot = s.time;
            }
        }
        if phases_len > 0 || !phases.is_null() {
            let buf = tri!(out_buf(phases, phases_len, samples.len() * n));
            for (row, s) in buf.chunks_mut(n).zip(samples) {
                for (slot, p) in row.iter_mut().zip(s.phases.iter()) {
                    *slot = p.value();
                }
            }
        }
        PcoStatus::Ok
    })
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_arc_count(sim: *const PcoSim, out: *mut usize) -> PcoStatus {
    guard(|| write_out(out, tri!(finished(sim)).series.points.len()))
}

/// Copy the containing-arc series.
///
/// # Safety
/// Both buffers must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_arc(sim: *const PcoSim, times: *mut f64, lambdas: *mut f64, len: usize) -> PcoStatus {
    guard(|| {
        let points = &tri!(finished(sim)).series.points;
        let t = tri!(out_buf(times, len, points.len()));
        for (slot, p) in t.iter_mut().zip(points) {
            *slot = p.time;
        }
        let l = tri!(out_buf(lambdas, len, points.len()));
        for (slot, p) in l.iter_mut().zip(points) {
            *slot = p.lambda;
        }
        PcoStatus::Ok
    })
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_firing_count(sim: *const PcoSim, out: *mut usize) -> PcoStatus {
    guard(|| write_out(out, tri!(finished(sim)).trace.firings.len()))
}

/// Copy firing times and zero-based oscillator indices.
///
/// # Safety
/// Both buffers must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_firings(
    sim: *const PcoSim,
    times: *mut f64,
    oscillators: *mut usize,
    len: usize,
) -> PcoStatus {
    guard(|| {
        let firings = &tri!(finished(sim)).trace.firings;
        let t = tri!(out_buf(times, len, firings.len()));
        for (slot, f) in t.iter_mut().zip(firings) {
            *slot = f.time;
        }
        let o = tri!(out_buf(oscillators, len, firings.len()));
        for (slot, f) in o.iter_mut().zip(firings) {
            *slot = f.oscillator;
        }
        PcoStatus::Ok
    })
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_report(sim: *const PcoSim, out: *mut PcoSyncReport) -> PcoStatus {
    guard(|| {
        let f = tri!(finished(sim));
        let o = &f.outcome;
        let report = PcoSyncReport {
            synced: o.sync.synced,
            sync_time: o.sync.sync_time.unwrap_or(f64::NAN),
            tolerance: o.sync.tolerance,
            final_lambda: o.final_lambda,
            monotone: o.monotonicity.monotone,
            firings: o.firings,
            coupling_records: f.trace.couplings.len(),
            min_alpha_effective: o.coupling.map_or(f64::NAN, |c| c.min),
        };
        write_out(out, report)
    })
}

/// Write the CSV files, report and plot script into `dir`.
///
/// # Safety
/// `sim` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pco_sim_write_outputs(sim: *const PcoSim, dir: *const c_char) -> PcoStatus {
    guard(|| {
        let s = tri!(sim_ref(sim));
        let f = tri!(finished(sim));
        let dir = tri!(str_arg(dir));
        let sc = &s.scenario;
        tri!(write_trace(&f.trace, &sc.sim, Path::new(dir), &sc.output.label, sc.sync_tol, sc.sync_hold)
            .map_err(from_lib));
        PcoStatus::Ok
    })
}

/// Containing arc of `n` phases in `[0, 1)`.
///
/// # Safety
/// `phases` must hold `n` values and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pco_containing_arc(phases: *const f64, n: usize, out: *mut f64) -> PcoStatus {
    guard(|| {
        if phases.is_null() {
            return fail(PcoStatus::NullPointer, "null phase array");
        }
        let values = std::slice::from_raw_parts(phases, n);
        let arc = tri!(containing_arc_of(values).map_err(|e| fail(PcoStatus::InvalidArgument, e.to_string())));
        write_out(out, arc)
    })
}

/// Coupling strength realized by an adjustment that ran `t0` of `tau_i`
/// seconds; `alpha` when `tau_i <= 0`.
#[no_mangle]
pub extern "C" fn pco_effective_coupling(t0: f64, tau_i: f64, alpha: f64) -> f64 {
    pco_sim::continuity::effective_coupling(t0, tau_i, alpha)
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pco_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, NUL-terminated and static.
#[no_mangle]
pub extern "C" fn pco_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
