use std::ffi::CStr;
use std::ptr;

use quasilab_ffi::*;

fn c(re: f64, im: f64) -> QlabComplex {
    QlabComplex { re, im }
}

fn amo(lambda: f64) -> *mut QlabPotential {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qlab_potential_amo(lambda, &mut p) }, QlabStatus::Ok);
    assert!(!p.is_null());
    p
}

#[test]
fn free_le_through_handle() {
    let mut p = ptr::null_mut();
    let st = unsafe { qlab_potential_from_coeffs(ptr::null(), ptr::null(), ptr::null(), 0, &mut p) };
    assert_eq!(st, QlabStatus::Ok);
    let mut out = QlabLeResult::default();
    let st = unsafe { qlab_converged_le(p, 1.0, c(3.0, 0.0), 0.0, 1e-4, &mut out) };
    assert_eq!(st, QlabStatus::Ok);
    assert!((out.value - 0.962_423_650_119_206_9).abs() < 1e-3);
    unsafe { qlab_potential_free(p) };
}

#[test]
fn potential_eval_matches_cosine() {
    let p = amo(0.5);
    let mut v = QlabComplex::default();
    assert_eq!(unsafe { qlab_potential_eval(p, c(0.0, 1.0), &mut v) }, QlabStatus::Ok);
    assert!((v.re - 1f64.cosh()).abs() < 1e-12 && v.im.abs() < 1e-12);
    unsafe { qlab_potential_free(p) };
}

#[test]
fn invalid_input_sets_message() {
    let mut p = ptr::null_mut();
    let st = unsafe { qlab_potential_amo(-1.0, &mut p) };
    assert_eq!(st, QlabStatus::InvalidInput);
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(qlab_last_error()) }.to_str().unwrap();
    assert!(msg.contains("lambda") || msg.contains("positive"), "{msg}");
    let s = unsafe { CStr::from_ptr(qlab_status_string(st)) };
    assert_eq!(s.to_str().unwrap(), "invalid input");
}

#[test]
fn null_handle_is_reported() {
    let mut out = QlabLeResult::default();
    let st = unsafe { qlab_converged_le(ptr::null(), 1.0, c(3.0, 0.0), 0.0, 1e-3, &mut out) };
    assert_eq!(st, QlabStatus::NullPointer);
}

#[test]
fn spectrum_two_call_pattern() {
    let mut p = ptr::null_mut();
    unsafe { qlab_potential_from_coeffs(ptr::null(), ptr::null(), ptr::null(), 0, &mut p) };
    let mut written = 0usize;
    let st = unsafe { qlab_truncated_spectrum(p, 1.0, 0.0, 0.0, 3, ptr::null_mut(), 0, &mut written) };
    assert_eq!(st, QlabStatus::BufferTooSmall);
    assert_eq!(written, 3);
    let mut buf = vec![QlabComplex::default(); written];
    let st = unsafe { qlab_truncated_spectrum(p, 1.0, 0.0, 0.0, 3, buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(st, QlabStatus::Ok);
    let mut re: Vec<f64> = buf.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let s = 2f64.sqrt();
    for (a, b) in re.iter().zip([-s, 0.0, s]) {
        assert!((a - b).abs() < 1e-12);
    }
    unsafe { qlab_potential_free(p) };
}

#[test]
fn winding_and_zeros_for_amo() {
    let p = amo(0.5);
    let mut w = QlabWinding::default();
    let st = unsafe { qlab_winding_n(p, 3.883_222_077_450_933, c(3.5, 0.0), 2.4, 100, 1024, &mut w) };
    assert_eq!(st, QlabStatus::Ok);
    assert_eq!(w.total_winding, -100);
    let mut buf = vec![QlabComplex::default(); 40];
    let mut written = 0;
    let st = unsafe { qlab_fn_zeros(p, 3.883_222_077_450_933, c(3.5, 0.0), 20, buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(st, QlabStatus::Ok);
    assert_eq!(written, 40);
    unsafe { qlab_potential_free(p) };
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/quasilab.h")).unwrap();
    for sym in ["qlab_potential_amo", "qlab_converged_le", "QLAB_STATUS_ZERO_ON_CONTOUR", "typedef struct QlabPotential"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
    assert!(!unsafe { CStr::from_ptr(qlab_version()) }.to_bytes().is_empty());
}
