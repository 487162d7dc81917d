use std::ffi::{CStr, CString};
use std::ptr;

use hodgelab_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    hl_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(hl_last_error()).to_string_lossy().into_owned()
}

const FORM: &str = r#"{"n":2,"bidegree":[0,1],"valueKind":"tangent","entries":[
    {"I":[],"J":[2],"tangent":1,"mode":[[1,0],[0,-1]],"re":0.5,"im":-0.25}]}"#;

#[test]
fn form_round_trip_and_operators() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(hl_form_from_json(cstr(FORM).as_ptr(), &mut f), HlStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(hl_form_to_json(f, &mut out), HlStatus::Ok);
        let text = take(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["entries"][0]["re"], 0.5);

        let mut d = ptr::null_mut();
        assert_eq!(hl_form_apply(f, HlOperator::Dbar, &mut d), HlStatus::Ok);
        let mut dd = ptr::null_mut();
        assert_eq!(hl_form_apply(d, HlOperator::Dbar, &mut dd), HlStatus::Ok);
        let mut n = HlNorms::default();
        assert_eq!(hl_form_norms(dd, 2, &mut n), HlStatus::Ok);
        assert!(n.l2 < 1e-12);
        assert_eq!(hl_form_norms(f, 2, &mut n), HlStatus::Ok);
        assert!(n.c0 <= n.c1 && n.l2 > 0.0);

        let mut h = ptr::null_mut();
        assert_eq!(hl_form_apply(f, HlOperator::Harmonic, &mut h), HlStatus::Ok);
        assert_eq!(hl_form_norms(h, 2, &mut n), HlStatus::Ok);
        assert_eq!(n.l2, 0.0);
        for p in [f, d, dd, h] {
            hl_form_free(p);
        }
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut f = ptr::null_mut();
        let bad = r#"{"n":2,"bidegree":[0,1],"valueKind":"scalar","entries":[{"I":[],"J":[5],"mode":[[0,0],[0,0]],"re":1,"im":0}]}"#;
        assert_eq!(hl_form_from_json(cstr(bad).as_ptr(), &mut f), HlStatus::InvalidArgument);
        assert!(last_error().contains("index 5"));
        assert!(f.is_null());
        assert_eq!(hl_form_from_json(ptr::null(), &mut f), HlStatus::NullPointer);
        assert_eq!(hl_form_from_json(cstr(FORM).as_ptr(), ptr::null_mut()), HlStatus::NullPointer);
        let mut m = ptr::null_mut();
        assert_eq!(hl_majorant_new(cstr("0").as_ptr(), cstr("1").as_ptr(), 5, &mut m), HlStatus::Contract);
        assert_eq!(hl_majorant_new(cstr("x").as_ptr(), cstr("1").as_ptr(), 5, &mut m), HlStatus::InvalidArgument);
        // a success clears the message
        assert_eq!(hl_majorant_new(cstr("1").as_ptr(), cstr("1").as_ptr(), 5, &mut m), HlStatus::Ok);
        assert!(hl_last_error().is_null());
        let mut x = 0.0;
        assert_eq!(hl_majorant_coeff(m, 6, &mut x), HlStatus::InvalidArgument);
        assert_eq!(hl_majorant_coeff(m, 0, &mut x), HlStatus::InvalidArgument);
        hl_majorant_free(m);
        hl_form_free(ptr::null_mut());
        hl_string_free(ptr::null_mut());
    }
}

#[test]
fn majorant_exact_and_rounded() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(hl_majorant_new(cstr("1/3").as_ptr(), cstr("0.75").as_ptr(), 8, &mut m), HlStatus::Ok);
        assert_eq!(hl_majorant_order(m), 8);
        let mut s = ptr::null_mut();
        assert_eq!(hl_majorant_coeff_exact(m, 2, &mut s), HlStatus::Ok);
        // x₂ = c x₁² = 3/16
        assert_eq!(take(s), "3/16");
        let mut r = 0.0;
        assert_eq!(hl_majorant_radius(m, &mut r), HlStatus::Ok);
        assert_eq!(r, 1.0);
        hl_majorant_free(m);
        assert_eq!(hl_majorant_new(cstr("2").as_ptr(), cstr("0").as_ptr(), 3, &mut m), HlStatus::Ok);
        assert_eq!(hl_majorant_radius(m, &mut r), HlStatus::Ok);
        assert!(r.is_infinite());
        hl_majorant_free(m);
        assert_eq!(hl_majorant_order(ptr::null()), 0);
    }
}

#[test]
fn experiment_runner() {
    let dir = tempfile::tempdir().unwrap();
    let out = cstr(dir.path().join("o").to_str().unwrap());
    let cfg = cstr(r#"{"geometry":{"n":2,"K":2,"oversample":2},"experiment":"majorant","majorant":{"c":"1","x1":"1","tau":"1/8"},"order":20}"#);
    unsafe {
        let mut report = ptr::null_mut();
        let mut pass = false;
        assert_eq!(hl_run_experiment(cfg.as_ptr(), out.as_ptr(), &mut report, &mut pass), HlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert!(pass);
        assert_eq!(v["pass"], true);
        assert!(dir.path().join("o/report.json").exists());
        assert!(dir.path().join("o/majorant.csv").exists());

        let bad = cstr(r#"{"geometry":{"n":2,"K":0,"oversample":2},"experiment":"kuranishi"}"#);
        assert_ne!(hl_run_experiment(bad.as_ptr(), ptr::null(), &mut report, &mut pass), HlStatus::Ok);
        assert!(!last_error().is_empty());
    }
}
