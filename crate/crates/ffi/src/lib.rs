//! C ABI over the holimcat checks and models.
//!
//! Inputs and reports cross the boundary as UTF-8 JSON. Handles are opaque
//! and owned by the caller once returned; each has a matching `_free`.
//! Failures set a thread-local message readable via [`hc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holimcat::cli::{check_document, model_document, Outcome, RunConfig};
use holimcat::io::{diagram_of, parse, validate_document, Document};
use holimcat::Error;
use serde_json::Value;

/// Mirrors the CLI exit codes, plus ABI-only failures.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A parsed input document.
pub struct HcDocument {
    doc: Document,
}

/// A finished report.
pub struct HcReport {
    json: CString,
    pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn from_error(e: &Error) -> HcStatus {
    set_error(e.to_string());
    match e {
        Error::BudgetExceeded(_) => HcStatus::BudgetExceeded,
        _ => HcStatus::InvalidInput,
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, HcStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(HcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(format!("argument is not UTF-8: {e}"));
        HcStatus::InvalidUtf8
    })
}

fn guarded(f: impl FnOnce() -> HcStatus) -> HcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        HcStatus::Panic
    })
}

fn config(options: Option<&str>) -> Result<RunConfig, HcStatus> {
    let mut cfg = RunConfig::default();
    let Some(text) = options else { return Ok(cfg) };
    let v: Value = parse(text).map_err(|e| from_error(&e))?;
    let bad = |key: &str| {
        set_error(format!("option `{key}` has the wrong type"));
        HcStatus::InvalidInput
    };
    let Some(map) = v.as_object() else { return Err(bad("<root>")) };
    for (key, val) in map {
        match key.as_str() {
            "max_dim" => cfg.max_dim = val.as_u64().ok_or_else(|| bad(key))? as usize,
            "budget" => cfg.budget = val.as_u64().filter(|b| *b > 0).ok_or_else(|| bad(key))?,
            "dim" => cfg.dim = val.as_u64().ok_or_else(|| bad(key))? as usize,
            "n" => cfg.n = Some(val.as_u64().ok_or_else(|| bad(key))? as usize),
            "members" => {
                let items = val.as_array().ok_or_else(|| bad(key))?;
                cfg.members = items
                    .iter()
                    .map(|m| m.as_str().map(str::to_string).ok_or_else(|| bad(key)))
                    .collect::<Result<_, _>>()?;
            }
            _ => {
                set_error(format!("unknown option `{key}`"));
                return Err(HcStatus::InvalidInput);
            }
        }
    }
    Ok(cfg)
}

unsafe fn finish(result: holimcat::Result<Outcome>, out: *mut *mut HcReport) -> HcStatus {
    match result {
        Ok(o) => {
            let json = CString::new(o.to_json()).expect("reports contain no nul bytes");
            *out = Box::into_raw(Box::new(HcReport { json, pass: o.pass }));
            if o.pass {
                HcStatus::Ok
            } else {
                HcStatus::CheckFailed
            }
        }
        Err(e) => from_error(&e),
    }
}

/// Message for the last failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON document (category, group, diagram or G-diagram).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_document_parse(json: *const c_char, out: *mut *mut HcDocument) -> HcStatus {
    if out.is_null() {
        set_error("null out pointer");
        return HcStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guarded(|| {
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse::<Document>(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(HcDocument { doc }));
                HcStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `doc` must come from [`hc_document_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hc_document_free(doc: *mut HcDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of base objects of a diagram document.
///
/// # Safety
/// `doc` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_document_base_objects(doc: *const HcDocument, out: *mut usize) -> HcStatus {
    if doc.is_null() || out.is_null() {
        set_error("null pointer argument");
        return HcStatus::NullPointer;
    }
    guarded(|| match diagram_of(&(*doc).doc) {
        Ok(x) => {
            *out = x.base().num_objects();
            HcStatus::Ok
        }
        Err(e) => from_error(&e),
    })
}

/// Runs every validator; `Ok` when the document is clean, `CheckFailed`
/// otherwise. `out` receives the validation reports either way.
///
/// # Safety
/// `doc` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_validate(doc: *const HcDocument, out: *mut *mut HcReport) -> HcStatus {
    if doc.is_null() || out.is_null() {
        set_error("null pointer argument");
        return HcStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guarded(|| {
        let result = validate_document(&(*doc).doc).map(|reports| {
            let pass = reports.iter().all(|r| r.is_clean());
            Outcome {
                report: serde_json::to_value(&reports).expect("reports serialize"),
                summary: Vec::new(),
                pass,
            }
        });
        finish(result, out)
    })
}

/// Runs a named check (`reedy`, `lemma-iso`, ...). `doc` may be null for
/// kinds that need no input. `options` is null or a JSON object with any of
/// `max_dim`, `budget`, `dim`, `members`, `n`.
///
/// # Safety
/// `kind` and a non-null `options` must be nul-terminated strings, a non-null
/// `doc` a live handle, and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_check(
    doc: *const HcDocument,
    kind: *const c_char,
    options: *const c_char,
    out: *mut *mut HcReport,
) -> HcStatus {
    if out.is_null() {
        set_error("null out pointer");
        return HcStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guarded(|| {
        let kind = match str_arg(kind) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let opts = if options.is_null() {
            None
        } else {
            match str_arg(options) {
                Ok(o) => Some(o),
                Err(s) => return s,
            }
        };
        let cfg = match config(opts) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let doc = doc.as_ref().map(|d| &d.doc);
        finish(check_document(kind, doc, &cfg), out)
    })
}

/// Builds a named model (`holim`, `bk-pullback`, `total-fiber`,
/// `grothendieck`). Options as for [`hc_check`].
///
/// # Safety
/// Same contract as [`hc_check`], except `doc` must not be null.
#[no_mangle]
pub unsafe extern "C" fn hc_model(
    doc: *const HcDocument,
    kind: *const c_char,
    options: *const c_char,
    out: *mut *mut HcReport,
) -> HcStatus {
    if doc.is_null() || out.is_null() {
        set_error("null pointer argument");
        return HcStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guarded(|| {
        let kind = match str_arg(kind) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let opts = if options.is_null() {
            None
        } else {
            match str_arg(options) {
                Ok(o) => Some(o),
                Err(s) => return s,
            }
        };
        let cfg = match config(opts) {
            Ok(c) => c,
            Err(s) => return s,
        };
        finish(model_document(kind, &(*doc).doc, &cfg), out)
    })
}

/// The report as JSON with sorted keys. Borrowed from the handle.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_report_json(report: *const HcReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_report_passed(report: *const HcReport) -> bool {
    report.as_ref().is_some_and(|r| r.pass)
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hc_report_free(report: *mut HcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
