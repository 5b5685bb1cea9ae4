use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use holimcat_ffi::*;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn load(name: &str) -> *mut HcDocument {
    let mut doc = ptr::null_mut();
    let st = unsafe { hc_document_parse(fixture(name).as_ptr(), &mut doc) };
    assert_eq!(st, HcStatus::Ok);
    assert!(!doc.is_null());
    doc
}

fn report_json(r: *const HcReport) -> serde_json::Value {
    let s = unsafe { CStr::from_ptr(hc_report_json(r)) };
    serde_json::from_str(s.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hc_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn reedy_passes_on_the_point_square() {
    let doc = load("point_square.json");
    let mut n = 0usize;
    assert_eq!(unsafe { hc_document_base_objects(doc, &mut n) }, HcStatus::Ok);
    assert_eq!(n, 3);

    let mut rep = ptr::null_mut();
    let kind = CString::new("reedy").unwrap();
    let st = unsafe { hc_check(doc, kind.as_ptr(), ptr::null(), &mut rep) };
    assert_eq!(st, HcStatus::Ok);
    assert!(unsafe { hc_report_passed(rep) });
    let v = report_json(rep);
    assert_eq!(v["method"], "homology proxy");
    assert_eq!(v["kind"], "reedy");
    unsafe {
        hc_report_free(rep);
        hc_document_free(doc);
    }
}

#[test]
fn failing_check_still_returns_a_report() {
    let doc = load("empty_corner_square.json");
    let mut rep = ptr::null_mut();
    let kind = CString::new("cube-cartesian").unwrap();
    let st = unsafe { hc_check(doc, kind.as_ptr(), ptr::null(), &mut rep) };
    assert_eq!(st, HcStatus::CheckFailed);
    assert!(!rep.is_null());
    assert!(!unsafe { hc_report_passed(rep) });
    unsafe {
        hc_report_free(rep);
        hc_document_free(doc);
    }
}

#[test]
fn options_reach_the_check() {
    let doc = load("swap_square_flip.json");
    let mut rep = ptr::null_mut();
    let kind = CString::new("lemma-iso").unwrap();
    let opts = CString::new(r#"{"members": ["{1}", "{2}"]}"#).unwrap();
    let st = unsafe { hc_check(doc, kind.as_ptr(), opts.as_ptr(), &mut rep) };
    assert_eq!(st, HcStatus::Ok, "{}", last_error());
    unsafe {
        hc_report_free(rep);
    }

    let bad = CString::new(r#"{"colour": 1}"#).unwrap();
    let st = unsafe { hc_check(doc, kind.as_ptr(), bad.as_ptr(), &mut rep) };
    assert_eq!(st, HcStatus::InvalidInput);
    assert!(rep.is_null());
    assert!(last_error().contains("colour"));
    unsafe { hc_document_free(doc) };
}

#[test]
fn tiny_budget_is_reported() {
    let doc = load("interval_cube.json");
    let mut rep = ptr::null_mut();
    let kind = CString::new("lemma-iso").unwrap();
    let opts = CString::new(r#"{"budget": 1}"#).unwrap();
    let st = unsafe { hc_check(doc, kind.as_ptr(), opts.as_ptr(), &mut rep) };
    assert_eq!(st, HcStatus::BudgetExceeded, "{}", last_error());
    unsafe { hc_document_free(doc) };
}

#[test]
fn model_reports_artifacts() {
    let doc = load("interval_square.json");
    let mut rep = ptr::null_mut();
    let kind = CString::new("holim").unwrap();
    let st = unsafe { hc_model(doc, kind.as_ptr(), ptr::null(), &mut rep) };
    assert_eq!(st, HcStatus::Ok, "{}", last_error());
    let v = report_json(rep);
    assert!(v["report"]["artifacts"].is_array());
    unsafe {
        hc_report_free(rep);
        hc_document_free(doc);
    }
}

#[test]
fn malformed_json_gives_an_offset() {
    let mut doc = ptr::null_mut();
    let text = CString::new("{\"poset\": [").unwrap();
    let st = unsafe { hc_document_parse(text.as_ptr(), &mut doc) };
    assert_eq!(st, HcStatus::InvalidInput);
    assert!(doc.is_null());
    assert!(last_error().contains("byte"));
}

#[test]
fn validation_flags_a_broken_table() {
    let doc = load("broken_composition.json");
    let mut rep = ptr::null_mut();
    let st = unsafe { hc_validate(doc, &mut rep) };
    assert_eq!(st, HcStatus::CheckFailed);
    unsafe {
        hc_report_free(rep);
        hc_document_free(doc);
    }
}

#[test]
fn null_arguments_are_rejected() {
    let mut rep = ptr::null_mut();
    let st = unsafe { hc_check(ptr::null(), ptr::null(), ptr::null(), &mut rep) };
    assert_eq!(st, HcStatus::NullPointer);
    assert!(unsafe { hc_report_json(ptr::null()) }.is_null());
    unsafe {
        hc_report_free(ptr::null_mut());
        hc_document_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(hc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

// The generated header must compile as C and agree with the Rust enum.
#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/holimcat.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["hc_document_parse", "hc_check", "hc_model", "hc_report_free", "HcStatus_BudgetExceeded = 3"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"holimcat.h\"\n\
         _Static_assert(HcStatus_CheckFailed == 1, \"status\");\n\
         int main(void) { HcDocument *d = 0; return (int)hc_document_parse(\"1\", &d) == 99; }\n",
    )
    .unwrap();
    let status = Command::new(cc)
        .args(["-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("holimcat-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
