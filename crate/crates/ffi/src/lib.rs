//! C ABI over `coflow-core`.
//!
//! Instances and schedules cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns a [`CoflowStatus`]; on failure [`coflow_last_error`] describes the
//! problem. Core, flow and port indices are 0-based.
//!
//! The header `include/coflow.h` is regenerated by `build.rs`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use coflow_core::lowerbound::lower_bounds;
use coflow_core::model::{predicted_makespan, Assignment, Instance, MakespanResult, Time};
use coflow_core::oracle::{brute_force_coflow, brute_force_flow, Limits};
use coflow_core::realizer::realize;
use coflow_core::schedulers::SchedulerKind;
use coflow_core::workload::{gen_instance, parse_instance, read_instance, Mixture};
use coflow_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoflowStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInstance = 4,
    NetworkMismatch = 5,
    OverLimit = 6,
    InvalidArgument = 7,
    Io = 8,
    Internal = 9,
    Panic = 10,
}

/// Values accepted by the `scheduler` argument of [`coflow_schedule_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoflowScheduler {
    Fls = 0,
    Flpt = 1,
    Cls = 2,
    FlptH = 3,
    ClsH = 4,
    Weaver = 5,
}

/// Values accepted by the `granularity` argument of [`coflow_oracle`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoflowGranularity {
    Flow = 0,
    Coflow = 1,
}

/// Exact rational `num / den`, `den > 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoflowRational {
    pub num: i64,
    pub den: i64,
}

impl From<Time> for CoflowRational {
    fn from(t: Time) -> Self {
        CoflowRational {
            num: *t.numer(),
            den: *t.denom(),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoflowBounds {
    pub port_lb: CoflowRational,
    pub flow_lb: CoflowRational,
    pub combined: CoflowRational,
}

/// Opaque instance handle.
pub struct CoflowInstance {
    inner: Instance,
}

/// Opaque handle to a scheduler run and its realized schedule.
pub struct CoflowSchedule {
    assignment: Assignment,
    makespan: MakespanResult,
    dump: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CoflowStatus {
    match err {
        Error::InvalidInstance(_) => CoflowStatus::InvalidInstance,
        Error::Parse { .. } => CoflowStatus::Parse,
        Error::NetworkMismatch { .. } => CoflowStatus::NetworkMismatch,
        Error::OverLimit { .. } => CoflowStatus::OverLimit,
        Error::Io { .. } => CoflowStatus::Io,
        Error::IncompleteAssignment(_) | Error::BoundViolation(_) | Error::Internal(_) => CoflowStatus::Internal,
        Error::Unsupported(_) | Error::InvalidArgument(_) => CoflowStatus::InvalidArgument,
    }
}

/// Runs `f`, records any error message and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), CoflowStatus>) -> CoflowStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoflowStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("panic inside coflow library");
            CoflowStatus::Panic
        }
    }
}

fn fail(err: Error) -> CoflowStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null(what: &str) -> CoflowStatus {
    set_error(&format!("null pointer passed as `{what}`"));
    CoflowStatus::NullArgument
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, CoflowStatus> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("`{what}` is not valid UTF-8"));
        CoflowStatus::InvalidUtf8
    })
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), CoflowStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, CoflowStatus> {
    ptr.as_ref().ok_or_else(|| null(what))
}

fn scheduler_kind(code: u32) -> Result<SchedulerKind, CoflowStatus> {
    Ok(match code {
        0 => SchedulerKind::Fls,
        1 => SchedulerKind::Flpt,
        2 => SchedulerKind::Cls,
        3 => SchedulerKind::FlptH,
        4 => SchedulerKind::ClsH,
        5 => SchedulerKind::Weaver,
        _ => return Err(fail(Error::InvalidArgument(format!("unknown scheduler code {code}")))),
    })
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn coflow_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance in the native text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_parse(text: *const c_char, out: *mut *mut CoflowInstance) -> CoflowStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let inner = parse_instance(text, Path::new("<text>")).map_err(fail)?;
        put(out, Box::into_raw(Box::new(CoflowInstance { inner })), "out")
    })
}

/// Loads an instance file in the native text format.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_load(path: *const c_char, out: *mut *mut CoflowInstance) -> CoflowStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let inner = read_instance(Path::new(path)).map_err(fail)?;
        put(out, Box::into_raw(Box::new(CoflowInstance { inner })), "out")
    })
}

/// Generates `coflows` coflows from the standard mixture on `cores`
/// unit-speed `ports x ports` cores. Same seed, same instance.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_generate(
    seed: u64,
    coflows: u32,
    ports: u32,
    cores: u32,
    out: *mut *mut CoflowInstance,
) -> CoflowStatus {
    guard(|| {
        let mixture = Mixture::standard(ports).map_err(fail)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = gen_instance(coflows, ports, cores as usize, &mixture, &mut rng).map_err(fail)?;
        put(out, Box::into_raw(Box::new(CoflowInstance { inner })), "out")
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `instance` must come from a `coflow_instance_*` constructor and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_free(instance: *mut CoflowInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_flow_count(instance: *const CoflowInstance, out: *mut usize) -> CoflowStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        put(out, inst.inner.flow_count(), "out")
    })
}

/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_coflow_count(
    instance: *const CoflowInstance,
    out: *mut usize,
) -> CoflowStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        put(out, inst.inner.coflows().len(), "out")
    })
}

/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_instance_core_count(instance: *const CoflowInstance, out: *mut usize) -> CoflowStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        put(out, inst.inner.network().cores(), "out")
    })
}

/// Lower bounds on the optimal makespan.
///
/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_lower_bounds(instance: *const CoflowInstance, out: *mut CoflowBounds) -> CoflowStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        let lb = lower_bounds(&inst.inner);
        put(
            out,
            CoflowBounds {
                port_lb: lb.port_lb.into(),
                flow_lb: lb.flow_lb.into(),
                combined: lb.combined.into(),
            },
            "out",
        )
    })
}

/// Runs a scheduler (a [`CoflowScheduler`] value) and realizes its schedule.
///
/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_run(
    instance: *const CoflowInstance,
    scheduler: u32,
    out: *mut *mut CoflowSchedule,
) -> CoflowStatus {
    guard(|| {
        let inst = &borrow(instance, "instance")?.inner;
        let kind = scheduler_kind(scheduler)?;
        let assignment = kind.schedule(inst).map_err(fail)?;
        let makespan = predicted_makespan(&assignment, inst).map_err(fail)?;
        let realized = realize(&assignment, inst).map_err(fail)?;
        let dump = CString::new(realized.dump(inst)).map_err(|_| fail(Error::Internal("NUL in dump".into())))?;
        put(
            out,
            Box::into_raw(Box::new(CoflowSchedule {
                assignment,
                makespan,
                dump,
            })),
            "out",
        )
    })
}

/// Releases a schedule. Null is ignored.
///
/// # Safety
/// `schedule` must come from [`coflow_schedule_run`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_free(schedule: *mut CoflowSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// # Safety
/// `schedule` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_makespan(
    schedule: *const CoflowSchedule,
    out: *mut CoflowRational,
) -> CoflowStatus {
    guard(|| {
        let s = borrow(schedule, "schedule")?;
        put(out, s.makespan.overall.into(), "out")
    })
}

/// Completion time of one core.
///
/// # Safety
/// `schedule` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_core_span(
    schedule: *const CoflowSchedule,
    core: usize,
    out: *mut CoflowRational,
) -> CoflowStatus {
    guard(|| {
        let s = borrow(schedule, "schedule")?;
        let span = s
            .makespan
            .per_core
            .get(core)
            .ok_or_else(|| fail(Error::InvalidArgument(format!("no core {core}"))))?;
        put(out, (*span).into(), "out")
    })
}

/// Core a flow was placed on.
///
/// # Safety
/// `schedule` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_core_of(
    schedule: *const CoflowSchedule,
    flow: usize,
    out: *mut usize,
) -> CoflowStatus {
    guard(|| {
        let s = borrow(schedule, "schedule")?;
        let core = s
            .assignment
            .flow_cores()
            .get(flow)
            .copied()
            .flatten()
            .ok_or_else(|| fail(Error::InvalidArgument(format!("no flow {flow}"))))?;
        put(out, core, "out")
    })
}

/// Slice dump, one `core,start,duration,i->j@k[,...]` line per slice. The
/// string is owned by the schedule.
///
/// # Safety
/// `schedule` must be a live handle; null is returned otherwise.
#[no_mangle]
pub unsafe extern "C" fn coflow_schedule_dump(schedule: *const CoflowSchedule) -> *const c_char {
    match schedule.as_ref() {
        Some(s) => s.dump.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Exhaustive optimum (a [`CoflowGranularity`] value selects the level).
/// Fails with `OverLimit` when `m^items` exceeds `max_states`.
///
/// # Safety
/// `instance` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coflow_oracle(
    instance: *const CoflowInstance,
    granularity: u32,
    max_states: u64,
    out: *mut CoflowRational,
) -> CoflowStatus {
    guard(|| {
        let inst = &borrow(instance, "instance")?.inner;
        let limits = Limits {
            max_states: max_states as u128,
            ..Limits::default()
        };
        let result = match granularity {
            0 => brute_force_flow(inst, limits),
            1 => brute_force_coflow(inst, limits),
            g => return Err(fail(Error::InvalidArgument(format!("unknown granularity {g}")))),
        }
        .map_err(fail)?;
        put(out, result.optimum.into(), "out")
    })
}
