use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rigidity_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    let mut needed = 0usize;
    unsafe { rigidity_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn tuned() -> *mut RigidityParams {
    let (w, r, s) = (CString::new("ab").unwrap(), CString::new("1").unwrap(), CString::new("sqrt2").unwrap());
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rigidity_params_tune(w.as_ptr(), r.as_ptr(), s.as_ptr(), &mut p) }, RigidityStatus::Ok);
    p
}

#[test]
fn model_handle() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { rigidity_model_build(RigidityVariant::Interval, 2, &mut m) }, RigidityStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { rigidity_model_gap_count(m, &mut n) }, RigidityStatus::Ok);
    assert_eq!(n, 17);
    let (e, inv) = (CString::new("h1^2 a").unwrap(), CString::new("A h1^-2").unwrap());
    let (mut y, mut z) = (0.0, 0.0);
    assert_eq!(unsafe { rigidity_model_evaluate(m, e.as_ptr(), 0.3, &mut y) }, RigidityStatus::Ok);
    assert_eq!(unsafe { rigidity_model_evaluate(m, inv.as_ptr(), y, &mut z) }, RigidityStatus::Ok);
    assert!((z - 0.3).abs() < 1e-9);
    let bad = CString::new("h3").unwrap();
    assert_eq!(unsafe { rigidity_model_evaluate(m, bad.as_ptr(), 0.3, &mut y) }, RigidityStatus::Parse);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { rigidity_model_evaluate(m, ptr::null(), 0.3, &mut y) }, RigidityStatus::NullPointer);
    unsafe { rigidity_model_free(m) };
    assert_eq!(unsafe { rigidity_model_build(RigidityVariant::Circle, 40, &mut m) }, RigidityStatus::InvalidArgument);
    unsafe { rigidity_model_free(ptr::null_mut()) };
}

#[test]
fn params_and_certificates() {
    let p = tuned();
    let (mut l, mut t, mut mu) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { rigidity_params_values(p, &mut l, &mut t, &mut mu) }, RigidityStatus::Ok);
    assert!((l - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!((t - 2f64.sqrt() / 4.0).abs() < 1e-15);
    assert!((mu - t / 2.0).abs() < 1e-15);

    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { rigidity_certify(p, 6, &mut cert) }, RigidityStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { rigidity_certificate_len(cert, &mut len) }, RigidityStatus::Ok);
    assert_eq!(len, 64);
    let mut needed = 0;
    let mut small = [0 as c_char; 4];
    assert_eq!(unsafe { rigidity_certificate_text(cert, small.as_mut_ptr(), 4, &mut needed) }, RigidityStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { rigidity_certificate_text(cert, buf.as_mut_ptr(), needed, &mut needed) }, RigidityStatus::Ok);
    let mut intervals = 0;
    assert_eq!(unsafe { rigidity_certificate_check(buf.as_ptr(), &mut intervals) }, RigidityStatus::Ok);
    assert_eq!(intervals, 64);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().replace("verdict = disjoint", "verdict = maybe");
    let text = CString::new(text).unwrap();
    assert_eq!(unsafe { rigidity_certificate_check(text.as_ptr(), &mut intervals) }, RigidityStatus::Counterexample);
    unsafe { rigidity_certificate_free(cert) };

    let mut describe_len = 0;
    unsafe { rigidity_params_describe(p, ptr::null_mut(), 0, &mut describe_len) };
    assert!(describe_len > 1);
    unsafe { rigidity_params_free(p) };
}

#[test]
fn tuning_errors() {
    let (w, r, s) = (CString::new("ab").unwrap(), CString::new("1+√2").unwrap(), CString::new("1").unwrap());
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rigidity_params_tune(w.as_ptr(), r.as_ptr(), s.as_ptr(), &mut p) }, RigidityStatus::Construction);
    assert!(p.is_null());
    let junk = CString::new("1+").unwrap();
    assert_eq!(unsafe { rigidity_params_tune(w.as_ptr(), junk.as_ptr(), s.as_ptr(), &mut p) }, RigidityStatus::Parse);
}

#[test]
fn growth_threshold() {
    let mut k = 0;
    assert_eq!(unsafe { rigidity_growth_threshold(1, 2, 4, 1, 100, 1, 1, &mut k) }, RigidityStatus::Ok);
    assert_eq!(k, 30);
    assert_eq!(unsafe { rigidity_growth_threshold(3, 2, 4, 1, 100, 1, 1, &mut k) }, RigidityStatus::InvalidArgument);
    assert_eq!(unsafe { rigidity_growth_threshold(1, 0, 4, 1, 100, 1, 1, &mut k) }, RigidityStatus::InvalidArgument);
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/rigidity.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "rigidity_last_error",
        "rigidity_model_build",
        "rigidity_model_evaluate",
        "rigidity_params_tune",
        "rigidity_certify",
        "rigidity_certificate_check",
        "rigidity_growth_threshold",
        "typedef struct RigidityModel RigidityModel",
        "RIGIDITY_STATUS_COUNTEREXAMPLE = 5",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles and runs a C program against the static library when a C
/// compiler is present.
#[test]
fn c_program_links() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("librigidity_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "rigidity.h"
int main(void) {
    RigidityParams *p = NULL;
    RigidityCertificate *c = NULL;
    size_t n = 0;
    uint32_t k = 0;
    if (rigidity_params_tune("ab", "1", "sqrt2", &p) != RIGIDITY_STATUS_OK) return 1;
    if (rigidity_certify(p, 5, &c) != RIGIDITY_STATUS_OK) return 2;
    if (rigidity_certificate_len(c, &n) != RIGIDITY_STATUS_OK || n != 32) return 3;
    if (rigidity_growth_threshold(1, 2, 4, 1, 100, 1, 1, &k) != RIGIDITY_STATUS_OK || k != 30) return 4;
    rigidity_certificate_free(c);
    rigidity_params_free(p);
    printf("ok %zu %u\n", n, k);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok 32 30\n");
}
