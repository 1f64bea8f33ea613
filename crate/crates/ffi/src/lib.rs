//! C ABI over the `sigmaint` engine.
//!
//! Problems and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every entry point returns a
//! [`SigmaintStatus`]; on anything other than `SIGMAINT_STATUS_OK` a message
//! is available from [`sigmaint_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::de::{value::StrDeserializer, IntoDeserializer};
use serde::Deserialize;
use sigmaint::cli::{parse_problem_text, run_problem, Mode, ProblemFile, Report, RunOptions};
use sigmaint::intersect::det_sign;
use sigmaint::poly::rat;

/// Result codes. Values 0 to 4 coincide with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaintStatus {
    Ok = 0,
    Internal = 1,
    HypothesisFailed = 2,
    Parse = 3,
    OracleFailed = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    InvalidArgument = 7,
    NoValue = 8,
    Panic = 9,
}

impl SigmaintStatus {
    fn from_exit_code(code: i32) -> Self {
        match code {
            0 => Self::Ok,
            2 => Self::HypothesisFailed,
            3 => Self::Parse,
            4 => Self::OracleFailed,
            _ => Self::Internal,
        }
    }
}

/// A parsed problem file together with run overrides.
pub struct SigmaintProblem {
    file: ProblemFile,
    opts: RunOptions,
}

/// The outcome of a run; `json` is the same document the CLI prints.
pub struct SigmaintReport {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SigmaintStatus, msg: impl Into<String>) -> SigmaintStatus {
    // interior NULs cannot cross the boundary
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
    status
}

fn guard(f: impl FnOnce() -> SigmaintStatus) -> SigmaintStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SigmaintStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SigmaintStatus> {
    if s.is_null() {
        return Err(fail(SigmaintStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(SigmaintStatus::InvalidUtf8, e.to_string()))
}

/// Last error message on this thread, or NULL. Valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn sigmaint_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sigmaint_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a TOML problem description.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle to release with [`sigmaint_problem_free`].
#[no_mangle]
pub unsafe extern "C" fn sigmaint_problem_parse(toml: *const c_char, out: *mut *mut SigmaintProblem) -> SigmaintStatus {
    guard(|| {
        if out.is_null() {
            return fail(SigmaintStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(toml) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_problem_text(text) {
            Ok(file) => {
                *out = Box::into_raw(Box::new(SigmaintProblem {
                    file,
                    opts: RunOptions::default(),
                }));
                SigmaintStatus::Ok
            }
            Err(e) => fail(SigmaintStatus::Parse, e.to_string()),
        }
    })
}

/// Overrides the seed of the functional and of the Newton starts.
///
/// # Safety
/// `problem` must be a live handle from [`sigmaint_problem_parse`].
#[no_mangle]
pub unsafe extern "C" fn sigmaint_problem_set_seed(problem: *mut SigmaintProblem, seed: u64) -> SigmaintStatus {
    guard(|| match problem.as_mut() {
        Some(p) => {
            p.opts.seed = Some(seed);
            SigmaintStatus::Ok
        }
        None => fail(SigmaintStatus::NullPointer, "null problem"),
    })
}

/// Overrides the mode, named as on the command line (`intersect-mod2`,
/// `crosscap-sum`, `oracle`, ...).
///
/// # Safety
/// `problem` must be a live handle and `mode` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_problem_set_mode(problem: *mut SigmaintProblem, mode: *const c_char) -> SigmaintStatus {
    guard(|| {
        let Some(p) = problem.as_mut() else {
            return fail(SigmaintStatus::NullPointer, "null problem");
        };
        let name = match read_str(mode) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let de: StrDeserializer<'_, serde::de::value::Error> = name.into_deserializer();
        match Mode::deserialize(de) {
            Ok(m) => {
                p.opts.mode = Some(m);
                SigmaintStatus::Ok
            }
            Err(e) => fail(SigmaintStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `problem` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_problem_free(problem: *mut SigmaintProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs a problem. The return value mirrors the CLI exit code. `*out`
/// receives a report whenever one exists, including for failed hypotheses
/// and oracle failures, and must be released with [`sigmaint_report_free`].
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_run(problem: *const SigmaintProblem, out: *mut *mut SigmaintReport) -> SigmaintStatus {
    guard(|| {
        if out.is_null() {
            return fail(SigmaintStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let Some(p) = problem.as_ref() else {
            return fail(SigmaintStatus::NullPointer, "null problem");
        };
        let outcome = run_problem(&p.file, &p.opts);
        let status = SigmaintStatus::from_exit_code(outcome.exit_code);
        if let Some(report) = outcome.report {
            let json = CString::new(report.to_json()).expect("JSON has no NUL");
            *out = Box::into_raw(Box::new(SigmaintReport { report, json }));
        }
        match (status, outcome.diagnostic) {
            (SigmaintStatus::Ok, _) => status,
            (_, Some(d)) => fail(status, d),
            (_, None) => fail(status, "run failed"),
        }
    })
}

/// The reported value, or `SIGMAINT_STATUS_NO_VALUE` when the mode produces
/// none (verification) or the run failed.
///
/// # Safety
/// `report` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_report_value(report: *const SigmaintReport, value: *mut i64) -> SigmaintStatus {
    guard(|| {
        let (Some(r), false) = (report.as_ref(), value.is_null()) else {
            return fail(SigmaintStatus::NullPointer, "null argument");
        };
        match r.report.value {
            Some(v) => {
                *value = v;
                SigmaintStatus::Ok
            }
            None => fail(SigmaintStatus::NoValue, "report carries no value"),
        }
    })
}

/// The report's status as a result code.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_report_status(report: *const SigmaintReport) -> SigmaintStatus {
    match report.as_ref() {
        Some(r) => SigmaintStatus::from_exit_code(r.report.exit_code),
        None => SigmaintStatus::NullPointer,
    }
}

/// The JSON report, borrowed from the handle.
///
/// # Safety
/// `report` must be NULL or a live handle; the string dies with it.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_report_json(report: *const SigmaintReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_report_free(report: *mut SigmaintReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Exact sign (-1, 0, 1) of the determinant of a row-major `n x n` integer
/// matrix.
///
/// # Safety
/// `entries` must point to `n * n` readable values (it may be NULL when
/// `n == 0`) and `sign` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sigmaint_det_sign(entries: *const i64, n: usize, sign: *mut i8) -> SigmaintStatus {
    guard(|| {
        if sign.is_null() || (entries.is_null() && n > 0) {
            return fail(SigmaintStatus::NullPointer, "null argument");
        }
        let Some(len) = n.checked_mul(n) else {
            return fail(SigmaintStatus::InvalidArgument, "matrix size overflows");
        };
        let flat = if n == 0 { &[][..] } else { std::slice::from_raw_parts(entries, len) };
        let m: Vec<Vec<_>> = flat.chunks(n.max(1)).map(|row| row.iter().map(|&v| rat(v)).collect()).collect();
        *sign = det_sign(&m);
        SigmaintStatus::Ok
    })
}
