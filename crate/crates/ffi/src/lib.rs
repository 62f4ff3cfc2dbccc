//! C interface to archlint.
//!
//! Every fallible function returns an [`ArchlintStatus`]; on anything other
//! than `ARCHLINT_STATUS_OK` a description is available from
//! [`archlint_last_error`] on the same thread. Handles are opaque and owned
//! by the caller, who releases them with the matching `_free` function.
//! Strings returned through `char **` out-parameters are released with
//! [`archlint_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use archlint::annotations::{scan_tree, CodeModel, ScanConfig};
use archlint::arch_model::{parse_architecture, serialize_architecture, ArchitectureModel};
use archlint::cli::render;
use archlint::conformance::{run_all, ConformanceReport, Fingerprint};
use archlint::refactor::{apply_plan, parse_plan};
use archlint::smells::{run_smells, SmellConfig};
use archlint::Severity;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchlintStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed or ill-formed architecture description, plan or setting.
    ParseError = 3,
    IoError = 4,
    /// A refactoring plan stopped at a failing step.
    PlanFailed = 5,
    Panic = 6,
}

/// A parsed architecture description.
pub struct ArchlintModel(ArchitectureModel);

/// Annotations scanned from source trees.
pub struct ArchlintCode(CodeModel);

/// Findings of a check or smell run.
pub struct ArchlintReport {
    command: &'static str,
    report: ConformanceReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(ArchlintStatus, String);

type Outcome = Result<(), Failure>;

fn fail(status: ArchlintStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

/// Runs `body`, turning errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Outcome) -> ArchlintStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            ArchlintStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ArchlintStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(fail(ArchlintStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ArchlintStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref()
        .ok_or_else(|| fail(ArchlintStatus::NullArgument, format!("{what} is NULL")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(fail(ArchlintStatus::NullArgument, "output pointer is NULL"))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> Outcome {
    let value = CString::new(value).map_err(|_| fail(ArchlintStatus::Panic, "output contains NUL"))?;
    *out = value.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next archlint call on this thread.
#[no_mangle]
pub extern "C" fn archlint_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn archlint_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from an archlint `char **` out-parameter and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn archlint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an architecture description.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_model_parse(text: *const c_char, out: *mut *mut ArchlintModel) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let source = c_str(text, "text")?;
        let model = parse_architecture(source).map_err(|e| fail(ArchlintStatus::ParseError, e.to_string()))?;
        put(out, ArchlintModel(model));
        Ok(())
    })
}

/// Writes the canonical text form of `model` to `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_model_serialize(
    model: *const ArchlintModel,
    out: *mut *mut c_char,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let model = handle(model, "model")?;
        put_string(out, serialize_architecture(&model.0))
    })
}

/// Number of components in `model`, 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn archlint_model_component_count(model: *const ArchlintModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.components.len())
}

/// # Safety
/// `model` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn archlint_model_free(model: *mut ArchlintModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Scans `root_count` source roots with default settings, or with the
/// `key = value` lines in `settings` when it is not NULL.
///
/// # Safety
/// `roots` must point to `root_count` NUL-terminated strings; `settings`
/// must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_code_scan(
    roots: *const *const c_char,
    root_count: usize,
    settings: *const c_char,
    out: *mut *mut ArchlintCode,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        if roots.is_null() || root_count == 0 {
            return Err(fail(ArchlintStatus::NullArgument, "no source roots given"));
        }
        let mut paths = Vec::with_capacity(root_count);
        for i in 0..root_count {
            paths.push(PathBuf::from(c_str(*roots.add(i), "root")?));
        }
        let mut config = ScanConfig::default();
        if !settings.is_null() {
            for line in c_str(settings, "settings")?.lines().map(str::trim) {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| fail(ArchlintStatus::ParseError, format!("expected `key = value`: {line}")))?;
                let known = config
                    .set(key.trim(), value.trim())
                    .map_err(|e| fail(ArchlintStatus::ParseError, e.to_string()))?;
                if !known {
                    return Err(fail(
                        ArchlintStatus::ParseError,
                        format!("unknown setting `{}`", key.trim()),
                    ));
                }
            }
        }
        let code = scan_tree(&paths, &config).map_err(|e| fail(ArchlintStatus::IoError, e.to_string()))?;
        put(out, ArchlintCode(code));
        Ok(())
    })
}

/// Number of annotation instances in `code`, 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn archlint_code_instance_count(code: *const ArchlintCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.len())
}

/// Writes the extraction dump (JSON) of `code` to `*out`.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_code_to_json(code: *const ArchlintCode, out: *mut *mut c_char) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let code = handle(code, "code")?;
        put_string(out, render::to_json(&render::extract_json(&code.0)))
    })
}

/// # Safety
/// `code` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn archlint_code_free(code: *mut ArchlintCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Runs the conformance checks.
///
/// # Safety
/// `model` and `code` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_check(
    model: *const ArchlintModel,
    code: *const ArchlintCode,
    out: *mut *mut ArchlintReport,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let (model, code) = (handle(model, "model")?, handle(code, "code")?);
        put(
            out,
            ArchlintReport {
                command: "check",
                report: run_all(&model.0, &code.0),
            },
        );
        Ok(())
    })
}

/// Runs every smell with default thresholds.
///
/// # Safety
/// `model` and `code` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_smells(
    model: *const ArchlintModel,
    code: *const ArchlintCode,
    out: *mut *mut ArchlintReport,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let (model, code) = (handle(model, "model")?, handle(code, "code")?);
        let findings = run_smells(&model.0, &code.0, &SmellConfig::default());
        let report = ConformanceReport::new(findings, Fingerprint::of(&model.0, &code.0));
        put(
            out,
            ArchlintReport {
                command: "smells",
                report,
            },
        );
        Ok(())
    })
}

/// Total findings in `report`, 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn archlint_report_finding_count(report: *const ArchlintReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.findings.len())
}

/// Findings of ERROR severity in `report`, 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn archlint_report_error_count(report: *const ArchlintReport) -> usize {
    report.as_ref().map_or(0, |r| {
        r.report
            .findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count()
    })
}

/// Writes the JSON rendering of `report` to `*out`.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_report_to_json(
    report: *const ArchlintReport,
    out: *mut *mut c_char,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out)?;
        let report = handle(report, "report")?;
        put_string(
            out,
            render::to_json(&render::report_json(report.command, &report.report)),
        )
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn archlint_report_free(report: *mut ArchlintReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Applies the plan in `plan_text` to `model`. On success `*out_model`
/// receives the new model and `*out_impact` the impact report as JSON;
/// `model` itself is never changed. `code` may be NULL, in which case
/// the impact report lists no annotations.
///
/// # Safety
/// `model` must be a live handle, `code` NULL or a live handle,
/// `plan_text` NUL-terminated, and both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn archlint_refactor(
    model: *const ArchlintModel,
    plan_text: *const c_char,
    code: *const ArchlintCode,
    out_model: *mut *mut ArchlintModel,
    out_impact: *mut *mut c_char,
) -> ArchlintStatus {
    guard(|| {
        out_ptr(out_model)?;
        out_ptr(out_impact)?;
        let model = handle(model, "model")?;
        let plan =
            parse_plan(c_str(plan_text, "plan")?).map_err(|e| fail(ArchlintStatus::ParseError, e.to_string()))?;
        let empty = CodeModel::default();
        let code = code.as_ref().map_or(&empty, |c| &c.0);
        let (next, impact) = apply_plan(&model.0, &plan, code)
            .map_err(|e| fail(ArchlintStatus::PlanFailed, format!("{}: {e}", e.code())))?;
        put_string(out_impact, render::to_json(&render::impact_json(&impact, "")))?;
        put(out_model, ArchlintModel(next));
        Ok(())
    })
}
