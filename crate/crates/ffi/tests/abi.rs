use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use chromalg_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    chromalg_string_free(s);
    out
}

#[test]
fn algebra_handles() {
    unsafe {
        let name = CString::new("e1").unwrap();
        let mut a = ptr::null_mut();
        assert_eq!(chromalg_algebra_builtin(name.as_ptr(), 3, &mut a), ChromalgStatus::Ok);
        let mut label = ptr::null_mut();
        assert_eq!(chromalg_algebra_classify(a, 8, 16, &mut label), ChromalgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(label)).unwrap();
        assert_eq!((v["n"].as_u64(), v["N"].as_u64()), (Some(0), Some(1)));
        let mut exact: c_int = -1;
        assert_eq!(chromalg_algebra_is_exact(a, 16, &mut exact, ptr::null_mut()), ChromalgStatus::Ok);
        assert_eq!(exact, 1);

        let bad = CString::new("bp1").unwrap();
        let mut b = ptr::null_mut();
        assert_eq!(chromalg_algebra_builtin(bad.as_ptr(), 3, &mut b), ChromalgStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(chromalg_algebra_classify(b, 8, 16, &mut out), ChromalgStatus::MathFailure);
        assert!(out.is_null());
        assert!(CStr::from_ptr(chromalg_last_error()).to_str().unwrap().contains("v2"));
        assert_eq!(chromalg_compare(a, b, 8, 16, &mut out), ChromalgStatus::MathFailure);
        chromalg_algebra_free(a);
        chromalg_algebra_free(b);

        let json = CString::new("{not json").unwrap();
        assert_eq!(chromalg_algebra_from_json(json.as_ptr(), &mut a), ChromalgStatus::InvalidInput);
        assert_eq!(chromalg_algebra_builtin(ptr::null(), 3, &mut a), ChromalgStatus::NullPointer);
    }
}

#[test]
fn hopf_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(chromalg_hopf_bp(3, 8, &mut h), ChromalgStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(chromalg_hopf_to_json(h, &mut json), ChromalgStatus::Ok);
        let text = CString::new(take(json)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(chromalg_hopf_from_json(text.as_ptr(), &mut again), ChromalgStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(chromalg_hopf_check(again, &mut report), ChromalgStatus::Ok);
        assert!(take(report).contains("axioms"));
        chromalg_hopf_free(h);
        chromalg_hopf_free(again);
    }
}

#[test]
fn strings_and_commands() {
    unsafe {
        assert_eq!(CStr::from_ptr(chromalg_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
        let mut d = ptr::null_mut();
        assert_eq!(chromalg_zeta_denominator(4, &mut d), ChromalgStatus::Ok);
        assert_eq!(take(d), "120");
        assert_eq!(chromalg_zeta_denominator(1, &mut d), ChromalgStatus::InvalidInput);

        let args = CString::new(r#"["zeta","denom","--k","6"]"#).unwrap();
        let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
        assert_eq!(chromalg_run(args.as_ptr(), &mut out, &mut err, &mut code), ChromalgStatus::Ok);
        assert_eq!((take(out).trim(), take(err).as_str(), code), ("252", "", 0));
        let args = CString::new(r#"["zeta","nope"]"#).unwrap();
        assert_eq!(chromalg_run(args.as_ptr(), &mut out, &mut err, &mut code), ChromalgStatus::Ok);
        assert_eq!(code, 2);
        take(out);
        assert!(take(err).contains("\"usage\""));
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/chromalg.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["chromalg_algebra_classify", "chromalg_hopf_check", "chromalg_run", "CHROMALG_STATUS_MATH_FAILURE"] {
        assert!(text.contains(f), "{f}");
    }
    // a C compiler is optional in build environments
    if let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() {
        assert!(status.success());
    }
}
