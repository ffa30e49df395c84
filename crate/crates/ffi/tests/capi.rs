use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use quasigap_ffi::*;

const FIBONACCI: &str = r#"{"k":2,"d":1,"alpha":[["(-1+1*sqrt(5))/2"]],"shift":["0","1/3"],"window":{"generators":[[1]]}}"#;

fn build(json: &str) -> (QgStatus, *mut QgScheme) {
    let json = CString::new(json).unwrap();
    let mut s = ptr::null_mut();
    let status = unsafe { qg_scheme_from_json(json.as_ptr(), &mut s) };
    (status, s)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qg_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn scheme_lifecycle() {
    let (status, s) = build(FIBONACCI);
    assert_eq!(status, QgStatus::Ok);
    let mut index = 0;
    assert_eq!(unsafe { qg_scheme_index(s, &mut index) }, QgStatus::Ok);
    assert_eq!(index, 1);
    let mut hit = false;
    assert_eq!(unsafe { qg_scheme_accept(s, [0i64, 0].as_ptr(), 2, &mut hit) }, QgStatus::Ok);
    assert!(hit);
    assert_eq!(unsafe { qg_scheme_accept(s, [0i64].as_ptr(), 1, &mut hit) }, QgStatus::Config);
    unsafe { qg_scheme_free(s) };
    unsafe { qg_scheme_free(ptr::null_mut()) };
}

#[test]
fn spectrum_table() {
    let (_, s) = build(FIBONACCI);
    let r = CString::new("1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qg_spectrum_csv(s, r.as_ptr(), 2, &mut out) }, QgStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { qg_string_free(out) };
    unsafe { qg_scheme_free(s) };
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], &["1", "2", "3", "3", "2"]);
}

#[test]
fn errors_are_reported() {
    let (status, s) = build("{\"k\":2}");
    assert_eq!(status, QgStatus::Config);
    assert!(s.is_null());
    assert!(last_error().contains("configuration"));

    let mut n = 0;
    let bad = CString::new("(1+sqrt5").unwrap();
    assert_eq!(unsafe { qg_steinhaus_gap_count(bad.as_ptr(), 3, &mut n) }, QgStatus::Config);
    assert!(last_error().contains("byte"));
    assert_eq!(unsafe { qg_steinhaus_gap_count(ptr::null(), 3, &mut n) }, QgStatus::NullArgument);
    assert_eq!(unsafe { qg_scheme_index(ptr::null(), &mut 0) }, QgStatus::NullArgument);
}

#[test]
fn gap_counts() {
    let phi = CString::new("(-1+1*sqrt(5))/2").unwrap();
    let mut n = 0;
    for (big_n, want) in [(1, 1), (3, 2), (4, 3)] {
        assert_eq!(unsafe { qg_steinhaus_gap_count(phi.as_ptr(), big_n, &mut n) }, QgStatus::Ok);
        assert_eq!(n, want);
    }
}

#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/quasigap.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["qg_scheme_from_json", "qg_scheme_free", "qg_spectrum_csv", "qg_string_free", "qg_last_error"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-xc"]).arg(&header).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
