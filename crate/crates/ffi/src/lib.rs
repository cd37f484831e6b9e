//! C ABI for `stoplat`.
//!
//! Instances are opaque handles created by [`stoplat_instance_parse`] and
//! released with [`stoplat_instance_free`]. Every call returns a
//! [`StoplatStatus`]; on anything but `STOPLAT_STATUS_OK` a message is
//! available from [`stoplat_last_error`] on the same thread. Strings handed
//! out by the library are NUL-terminated, hold times in the instance text
//! format, and must be released with [`stoplat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use stoplat::search::hunt::{hunt, HuntConfig};
use stoplat::search::{
    decompose_stopping, interpolate_cone, interpolate_pointwise, max_stopping_minorant, Grid,
    SearchOutcome,
};
use stoplat::{Error, Instance, TimeKind};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoplatStatus {
    Ok = 0,
    Error = 1,
    InvalidInput = 2,
    NotFoundOnGrid = 3,
    PreconditionFailed = 4,
    Panic = 5,
}

/// A parsed instance.
pub struct StoplatInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).expect("NUL bytes removed"));
}

type Outcome = Result<StoplatStatus, (StoplatStatus, String)>;

fn status_of(e: &Error) -> StoplatStatus {
    match e {
        Error::Precondition(_) => StoplatStatus::PreconditionFailed,
        Error::Parse { .. }
        | Error::SpaceMismatch { .. }
        | Error::InvalidSpace(_)
        | Error::InvalidPartition(_)
        | Error::InvalidFiltration(_)
        | Error::Instance(_)
        | Error::InvalidScalar(_)
        | Error::InvalidTruncation(_)
        | Error::Negative { .. } => StoplatStatus::InvalidInput,
        _ => StoplatStatus::Error,
    }
}

fn fail(e: Error) -> (StoplatStatus, String) {
    (status_of(&e), e.to_string())
}

fn invalid(message: &str) -> (StoplatStatus, String) {
    (StoplatStatus::InvalidInput, message.to_string())
}

fn guard(f: impl FnOnce() -> Outcome) -> StoplatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == StoplatStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            StoplatStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (StoplatStatus, String)> {
    if s.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn instance<'a>(handle: *const StoplatInstance) -> Result<&'a Instance, (StoplatStatus, String)> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| invalid("instance handle is null"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (StoplatStatus, String)> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    let s = CString::new(s).map_err(|_| invalid("output contains a NUL byte"))?;
    *out = s.into_raw();
    Ok(())
}

fn kind(optional: bool) -> TimeKind {
    TimeKind::from_optional_flag(optional)
}

/// Parses instance text. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_instance_parse(text: *const c_char, out: *mut *mut StoplatInstance) -> StoplatStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let inner = Instance::parse(read_str(text, "text")?).map_err(fail)?;
        *out = Box::into_raw(Box::new(StoplatInstance { inner }));
        Ok(StoplatStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must come from [`stoplat_instance_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn stoplat_instance_free(handle: *mut StoplatInstance) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Canonical text of the instance.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_instance_emit(handle: *const StoplatInstance, out: *mut *mut c_char) -> StoplatStatus {
    guard(|| {
        write_string(out, instance(handle)?.emit())?;
        Ok(StoplatStatus::Ok)
    })
}

/// Number of outcomes, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stoplat_instance_outcomes(handle: *const StoplatInstance) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.space().size())
}

/// Whether the named time is a stopping (or, with `optional`, optional) time.
///
/// # Safety
/// `handle` must be a live handle, `name` a valid string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_check_time(
    handle: *const StoplatInstance,
    name: *const c_char,
    optional: bool,
    out: *mut bool,
) -> StoplatStatus {
    guard(|| {
        let inst = instance(handle)?;
        let name = read_str(name, "name")?;
        let t = inst.time(name).ok_or_else(|| invalid(&format!("unknown time `{name}`")))?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = kind(optional).admits(t, &inst.filtration).map_err(fail)?;
        Ok(StoplatStatus::Ok)
    })
}

/// Largest admitted minorant of the named time, as space-separated values.
///
/// # Safety
/// As for [`stoplat_check_time`], with `out` receiving an owned string.
#[no_mangle]
pub unsafe extern "C" fn stoplat_minorant(
    handle: *const StoplatInstance,
    name: *const c_char,
    optional: bool,
    out: *mut *mut c_char,
) -> StoplatStatus {
    guard(|| {
        let inst = instance(handle)?;
        let name = read_str(name, "name")?;
        let t = inst.time(name).ok_or_else(|| invalid(&format!("unknown time `{name}`")))?;
        let m = max_stopping_minorant(t, &inst.filtration, kind(optional)).map_err(fail)?;
        write_string(out, m.to_string())?;
        Ok(StoplatStatus::Ok)
    })
}

/// Decomposes the `S` role over the `T1, T2, …` roles on the grid with the
/// given denominator. On success `*out` holds one line per part; on
/// `NOT_FOUND_ON_GRID` it holds the explored-state count and digest.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_decompose(
    handle: *const StoplatInstance,
    grid_denominator: i64,
    optional: bool,
    out: *mut *mut c_char,
) -> StoplatStatus {
    guard(|| {
        let inst = instance(handle)?;
        let s = inst.target_time().map_err(fail)?;
        let parts = inst.part_times().map_err(fail)?;
        let grid = Grid::covering(grid_denominator, std::iter::once(&s).chain(&parts)).map_err(fail)?;
        match decompose_stopping(&s, &parts, &inst.filtration, &grid, kind(optional)) {
            SearchOutcome::Found(d) => {
                let lines: Vec<String> = d.parts.iter().map(|p| p.to_string()).collect();
                write_string(out, lines.join("\n"))?;
                Ok(StoplatStatus::Ok)
            }
            SearchOutcome::NotFoundOnGrid(ex) => {
                write_string(out, format!("explored {} digest {}", ex.states_explored, ex.digest))?;
                Ok(StoplatStatus::NotFoundOnGrid)
            }
            SearchOutcome::PreconditionFailed(p) => Err((StoplatStatus::PreconditionFailed, p.to_string())),
        }
    })
}

/// Interpolates between the sets `A` and `B`: the pointwise join of `A`, or
/// with `cone` the least cone-order interpolant on the grid.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_interpolate(
    handle: *const StoplatInstance,
    cone: bool,
    grid_denominator: i64,
    optional: bool,
    out: *mut *mut c_char,
) -> StoplatStatus {
    guard(|| {
        let inst = instance(handle)?;
        let a = inst.resolve(&inst.set_a).map_err(fail)?;
        let b = inst.resolve(&inst.set_b).map_err(fail)?;
        let k = kind(optional);
        if !cone {
            let t = interpolate_pointwise(&a, &b, &inst.filtration, k).map_err(fail)?;
            write_string(out, t.to_string())?;
            return Ok(StoplatStatus::Ok);
        }
        let grid = Grid::covering(grid_denominator, a.iter().chain(&b)).map_err(fail)?;
        match interpolate_cone(&a, &b, &inst.filtration, &grid.with_infinity(false), k) {
            SearchOutcome::Found(t) => {
                write_string(out, t.to_string())?;
                Ok(StoplatStatus::Ok)
            }
            SearchOutcome::NotFoundOnGrid(ex) => {
                write_string(out, format!("explored {} digest {}", ex.states_explored, ex.digest))?;
                Ok(StoplatStatus::NotFoundOnGrid)
            }
            SearchOutcome::PreconditionFailed(p) => Err((StoplatStatus::PreconditionFailed, p.to_string())),
        }
    })
}

/// Runs the hunter with default settings and writes the machine report.
/// `threads = 0` uses one thread per core; the report does not depend on it.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stoplat_hunt(
    seed: u64,
    instances: u64,
    threads: u32,
    optional: bool,
    out: *mut *mut c_char,
) -> StoplatStatus {
    guard(|| {
        let config = HuntConfig {
            seed,
            instances,
            threads: threads as usize,
            kind: kind(optional),
            ..HuntConfig::default()
        };
        let report = hunt(&config).map_err(fail)?;
        write_string(out, report.to_text())?;
        Ok(StoplatStatus::Ok)
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn stoplat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn stoplat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn stoplat_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

