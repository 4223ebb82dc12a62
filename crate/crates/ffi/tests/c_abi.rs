use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qkzlab_ffi::*;

fn parse(s: &str) -> *mut QkzPoly {
    let c = CString::new(s).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qkz_poly_parse(c.as_ptr(), &mut out) }, QkzStatus::Ok);
    out
}

fn render(p: *const QkzPoly) -> String {
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { qkz_poly_render(p, &mut s) }, QkzStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qkz_string_free(s) };
    text
}

fn last_error() -> Option<String> {
    let m = qkz_last_error_message();
    if m.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(m) }.to_str().unwrap().to_owned();
    unsafe { qkz_string_free(m) };
    Some(s)
}

#[test]
fn parse_render_round_trip() {
    let p = parse("tau^3 + 2*tau^2 + 3*tau + 1");
    assert_eq!(render(p), "1 + 3*tau + 2*tau^2 + tau^3");
    unsafe { qkz_poly_free(p) };
}

#[test]
fn arithmetic_and_equality() {
    let a = parse("1 + tau");
    let b = parse("1 - tau");
    let mut sum = ptr::null_mut();
    let mut prod = ptr::null_mut();
    unsafe {
        assert_eq!(qkz_poly_add(a, b, &mut sum), QkzStatus::Ok);
        assert_eq!(qkz_poly_mul(a, b, &mut prod), QkzStatus::Ok);
    }
    assert_eq!(render(sum), "2");
    assert_eq!(render(prod), "1 - tau^2");
    let expected = parse("1 - tau^2");
    let mut eq = false;
    assert_eq!(unsafe { qkz_poly_eq(prod, expected, &mut eq) }, QkzStatus::Ok);
    assert!(eq);
    assert_eq!(unsafe { qkz_poly_eq(sum, expected, &mut eq) }, QkzStatus::Ok);
    assert!(!eq);
    for p in [a, b, sum, prod, expected] {
        unsafe { qkz_poly_free(p) };
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let bad = CString::new("1 + + x^").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qkz_poly_parse(bad.as_ptr(), &mut out) }, QkzStatus::ParseError);
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("parse"));

    assert_eq!(unsafe { qkz_poly_parse(ptr::null(), &mut out) }, QkzStatus::NullPointer);
    let a = parse("1");
    assert_eq!(unsafe { qkz_poly_add(a, ptr::null(), &mut out) }, QkzStatus::NullPointer);
    assert_eq!(unsafe { qkz_poly_eq(a, a, ptr::null_mut()) }, QkzStatus::NullPointer);

    let seq = [2usize, 1];
    assert_eq!(unsafe { qkz_psi_seq_homogeneous(seq.as_ptr(), 2, 2, &mut out) }, QkzStatus::InvalidArgument);

    // a successful call clears the message
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qkz_poly_render(a, &mut s) }, QkzStatus::Ok);
    unsafe { qkz_string_free(s) };
    assert!(last_error().is_none());
    unsafe { qkz_poly_free(a) };
}

#[test]
fn tsscpp_polynomials() {
    let tau = parse("tau");
    let t = parse("t");
    let weights = [t as *const QkzPoly, tau, tau, tau];
    for method in [QkzMethod::Direct, QkzMethod::Lgv, QkzMethod::Extract] {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { qkz_tsscpp_gen_poly(3, false, weights.as_ptr(), 3, method, &mut out) }, QkzStatus::Ok);
        assert_eq!(render(out), "1 + 3*tau + 2*tau^2 + tau^3");
        unsafe { qkz_poly_free(out) };
        assert_eq!(unsafe { qkz_tsscpp_gen_poly(3, true, weights.as_ptr(), 3, method, &mut out) }, QkzStatus::Ok);
        assert_eq!(render(out), "t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3");
        unsafe { qkz_poly_free(out) };
    }
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qkz_tsscpp_gen_poly(3, true, ptr::null(), 0, QkzMethod::Lgv, &mut out) }, QkzStatus::Ok);
    assert_eq!(render(out), "t0 + t1 + t0^2*t1 + t0^2*t2 + t0*t1^2 + t0*t1*t2 + t1^2*t2");
    unsafe { qkz_poly_free(out) };
    assert_eq!(unsafe { qkz_tsscpp_gen_poly(3, false, weights.as_ptr(), 2, QkzMethod::Lgv, &mut out) }, QkzStatus::InvalidArgument);
    unsafe {
        qkz_poly_free(t);
        qkz_poly_free(tau);
    }
}

#[test]
fn components_and_sum_rules() {
    for (seq, expected) in [([1usize, 3, 5], "tau + tau^3"), ([1, 3, 4], "1 + tau^2"), ([1, 2, 5], "tau^2"), ([1, 2, 4], "2*tau")] {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { qkz_psi_seq_homogeneous(seq.as_ptr(), 3, 3, &mut out) }, QkzStatus::Ok);
        assert_eq!(render(out), expected);
        unsafe { qkz_poly_free(out) };
    }
    let (mut sum, mut refined) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { qkz_sum_rules(3, &mut sum, &mut refined) }, QkzStatus::Ok);
    assert_eq!(render(sum), "1 + 3*tau + 2*tau^2 + tau^3");
    assert_eq!(render(refined), "t + tau + 2*t^2*tau + 2*t*tau^2 + tau^3");
    let mut residual = ptr::null_mut();
    assert_eq!(unsafe { qkz_conjecture_residual(4, &mut residual) }, QkzStatus::Ok);
    assert_eq!(render(residual), "0");
    unsafe {
        qkz_poly_free(sum);
        qkz_poly_free(refined);
        qkz_poly_free(residual);
    }
}

#[test]
fn verify_returns_a_json_report() {
    let suite = CString::new("tsscpp").unwrap();
    let mut json: *mut c_char = ptr::null_mut();
    let mut passed = false;
    assert_eq!(unsafe { qkz_verify(suite.as_ptr(), 2, &mut json, &mut passed) }, QkzStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { qkz_string_free(json) };
    assert!(text.contains("\"schema\":\"qkzlab-report/1\""));
    assert!(text.contains("tsscpp/asm-count/n=2"));

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { qkz_verify(unknown.as_ptr(), 2, &mut json, &mut passed) }, QkzStatus::InvalidArgument);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qkzlab.h")).unwrap();
    for name in [
        "qkz_poly_parse",
        "qkz_poly_render",
        "qkz_poly_free",
        "qkz_poly_add",
        "qkz_poly_mul",
        "qkz_poly_eq",
        "qkz_tsscpp_gen_poly",
        "qkz_psi_seq_homogeneous",
        "qkz_sum_rules",
        "qkz_conjecture_residual",
        "qkz_verify",
        "qkz_last_error_message",
        "qkz_string_free",
        "typedef struct QkzPoly QkzPoly",
        "QKZ_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("qkzlab_header_check.c");
    std::fs::write(
        &src,
        "#include \"qkzlab.h\"\nint main(void) { QkzPoly *p = 0; enum QkzStatus s = qkz_poly_parse(\"1\", &p); qkz_poly_free(p); return s == QKZ_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
