use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gfock::Complex64;
use gfock_ffi::*;

fn c(re: f64, im: f64) -> GfockComplex {
    GfockComplex { re, im }
}

fn seq(re: &[f64]) -> *mut GfockCoeffSeq {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gfock_coeffseq_new(re.as_ptr(), ptr::null(), re.len(), &mut out) }, GfockStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gfock_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn kernel_spot_value() {
    let mut k = GfockKernelValue::default();
    let st = unsafe { gfock_kernel(GfockSpace::Hp, 1, c(1.0, 0.0), c(1.0, 0.0), 60, &mut k) };
    assert_eq!(st, GfockStatus::Ok);
    let e5 = 5.0 * std::f64::consts::E;
    assert!((k.closed.re - e5).abs() < 1e-12);
    assert!((k.series.re - e5).abs() < 1e-12);
    assert!(k.gap < 1e-12);
}

#[test]
fn weights_and_inner_products() {
    let mut w = 0.0;
    assert_eq!(unsafe { gfock_weight(GfockSpace::Hp, 1, 2, &mut w) }, GfockStatus::Ok);
    assert!((w - 2.0 / 9.0).abs() < 1e-15);
    assert_eq!(unsafe { gfock_weight(GfockSpace::Fp, 1, 2, &mut w) }, GfockStatus::Ok);
    assert_eq!(w, 18.0);

    let f = seq(&[1.0, 2.0]);
    let g = seq(&[3.0, 1.0, 5.0]);
    let mut ip = GfockComplex::default();
    assert_eq!(unsafe { gfock_inner(GfockSpace::Fp, 1, f, g, &mut ip) }, GfockStatus::Ok);
    // 1*3*1 + 2*1*(1!*4)
    assert_eq!(ip, c(11.0, 0.0));
    let mut v = GfockComplex::default();
    assert_eq!(unsafe { gfock_eval(g, c(0.0, 1.0), &mut v) }, GfockStatus::Ok);
    assert_eq!(v, c(-2.0, 1.0));
    unsafe {
        gfock_coeffseq_free(f);
        gfock_coeffseq_free(g);
    }
}

#[test]
fn section_reproduces() {
    let f = seq(&[0.5, -1.0, 0.25, 2.0]);
    let w = c(0.3, -0.7);
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { gfock_kernel_section(GfockSpace::Hp, 2, w, 3, &mut k) }, GfockStatus::Ok);
    assert_eq!(unsafe { gfock_coeffseq_truncation(k) }, 3);
    let (mut ip, mut fw) = (GfockComplex::default(), GfockComplex::default());
    unsafe {
        gfock_inner(GfockSpace::Hp, 2, f, k, &mut ip);
        gfock_eval(f, w, &mut fw);
    }
    assert!((ip.re - fw.re).abs() < 1e-14 && (ip.im - fw.im).abs() < 1e-14);
    unsafe {
        gfock_coeffseq_free(k);
        gfock_coeffseq_free(f);
    }
}

#[test]
fn op_apply_and_errors() {
    let mono = seq(&[0.0, 0.0, 0.0, 1.0]);
    let expr = CString::new("adj(R0,hp,1)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gfock_op_apply(expr.as_ptr(), mono, 6, &mut out) }, GfockStatus::Ok);
    let mut v = GfockComplex::default();
    unsafe { gfock_coeffseq_get(out, 4, &mut v) };
    assert_eq!(v.re, 25.0 / 64.0);
    unsafe { gfock_coeffseq_free(out) };

    let bad = CString::new("adj(R0,").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gfock_op_apply(bad.as_ptr(), mono, 6, &mut out) }, GfockStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("operator expression"));

    assert_eq!(unsafe { gfock_op_apply(ptr::null(), mono, 6, &mut out) }, GfockStatus::NullPointer);
    assert_eq!(last_error(), "null pointer: expr");
    unsafe { gfock_coeffseq_free(mono) };
}

#[test]
fn invalid_inputs() {
    let nan = [f64::NAN];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gfock_coeffseq_new(nan.as_ptr(), ptr::null(), 1, &mut out) }, GfockStatus::InvalidArgument);
    assert_eq!(unsafe { gfock_coeffseq_new(nan.as_ptr(), ptr::null(), 0, &mut out) }, GfockStatus::InvalidArgument);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gfock_stirling2(31, 2, &mut s) }, GfockStatus::OutOfRange);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { gfock_quadrature_new(0, &mut q) }, GfockStatus::InvalidArgument);
    let mut w = 0.0;
    assert_eq!(unsafe { gfock_weight(GfockSpace::Fock, 0, 400, &mut w) }, GfockStatus::Overflow);
}

#[test]
fn transform_of_hermite_function() {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { gfock_quadrature_new(200, &mut q) }, GfockStatus::Ok);
    let xi3 = seq(&[0.0, 0.0, 0.0, 1.0]);
    let z = c(0.4, 0.9);
    let mut t = GfockTransformValue::default();
    let st = unsafe { gfock_transform(GfockTransformKind::Sbp, 2, xi3, z, 32, q, &mut t) };
    assert_eq!(st, GfockStatus::Ok);
    // SB_2 xi_3 = z^3 / (sqrt(3!) 4^2)
    let want = Complex64::from(z).powu(3) / (6f64.sqrt() * 16.0);
    assert!((Complex64::from(t.value) - want).norm() < 1e-8);
    assert!(t.route_gap < 1e-8);
    assert!(!t.tail_unresolved);
    unsafe {
        gfock_coeffseq_free(xi3);
        gfock_quadrature_free(q);
    }
}

#[test]
fn strings() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gfock_stirling2(30, 15, &mut s) }, GfockStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gfock_string_free(s) };
    assert_eq!(text, "12879868072770626040000");

    let spec = CString::new("hp:2").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { gfock_moments_certificate(spec.as_ptr(), 4, GfockPsdMode::Exact, &mut json) },
        GfockStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { gfock_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["stieltjes"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 10);
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let lib = target_dir().join("libgfock_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile_dir();
    let exe = tmp.join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn tempfile_dir() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-smoke");
    std::fs::create_dir_all(&d).unwrap();
    d
}
