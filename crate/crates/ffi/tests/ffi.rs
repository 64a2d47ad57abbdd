use std::ffi::CStr;
use std::process::Command;

use q2fourier_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qf_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions() {
    let mut z = QfComplex { re: f64::NAN, im: f64::NAN };
    let st = unsafe { qf_cos_alpha(0.5, 0.0, QfComplex { re: 0.0, im: 0.0 }, &mut z) };
    assert_eq!(st, QfStatus::Ok);
    assert_eq!(z, QfComplex { re: 1.0, im: 0.0 });
    assert!(last_error().is_empty());

    let st = unsafe { qf_sin_alpha(0.5, 0.0, QfComplex { re: 0.0, im: 0.0 }, &mut z) };
    assert_eq!(st, QfStatus::Ok);
    assert_eq!(z.re, 0.0);

    // e_α(ix) = cos_α(x) + i sin_α(x) for real x
    let (mut c, mut s, mut e) = (z, z, z);
    let x = QfComplex { re: 0.7, im: 0.0 };
    unsafe {
        assert_eq!(qf_cos_alpha(0.6, 0.5, x, &mut c), QfStatus::Ok);
        assert_eq!(qf_sin_alpha(0.6, 0.5, x, &mut s), QfStatus::Ok);
        assert_eq!(qf_exp_alpha(0.6, 0.5, QfComplex { re: 0.0, im: 0.7 }, &mut e), QfStatus::Ok);
    }
    assert!((e.re - c.re).abs() < 1e-15 && (e.im - s.re).abs() < 1e-15);

    let mut v = 0.0;
    assert_eq!(unsafe { qf_solve_q(1, &mut v) }, QfStatus::Ok);
    assert_eq!(v, 0.6180339887498949);
    // Γ_q(3) = [2]_q! = 1 + q
    assert_eq!(unsafe { qf_q_gamma(3.0, 0.5, &mut v) }, QfStatus::Ok);
    assert!((v - 1.5).abs() < 1e-15);
}

#[test]
fn error_reporting() {
    let mut v = 0.0;
    assert_eq!(unsafe { qf_q_gamma(-2.0, 0.5, &mut v) }, QfStatus::Pole);
    assert!(last_error().contains("pole"));
    assert_eq!(unsafe { qf_solve_q(0, &mut v) }, QfStatus::Domain);
    let mut z = QfComplex { re: 0.0, im: 0.0 };
    assert_eq!(unsafe { qf_cos_alpha(1.5, 0.0, z, &mut z) }, QfStatus::Domain);
    assert_eq!(unsafe { qf_cos_alpha(0.5, 0.0, z, std::ptr::null_mut()) }, QfStatus::NullPointer);
    assert!(last_error().contains("null"));
    let mut plan = std::ptr::null_mut();
    assert_eq!(unsafe { qf_plan_new(0.5, 0.0, 0, 1, -5, 5, true, &mut plan) }, QfStatus::Grid);
    assert!(plan.is_null());
    unsafe { qf_plan_free(std::ptr::null_mut()) };
}

#[test]
fn plan_round_trip() {
    let mut plan = std::ptr::null_mut();
    assert_eq!(unsafe { qf_plan_new(0.5, 0.0, 0, 2, -15, 60, false, &mut plan) }, QfStatus::Ok);
    let mut c = 0.0;
    assert_eq!(unsafe { qf_plan_norm_constant(plan, &mut c) }, QfStatus::Ok);
    assert!(c > 0.0);

    let pos = [1.0, 0.5, -0.25].map(|re| QfComplex { re, im: 0.0 });
    let neg = [0.75, 0.0, 2.0].map(|re| QfComplex { re, im: 0.1 });
    let zero = QfComplex { re: 0.0, im: 0.0 };
    let (mut hp, mut hn) = (vec![zero; 76], vec![zero; 76]);
    let st = unsafe { qf_plan_forward(plan, pos.as_ptr(), neg.as_ptr(), 3, hp.as_mut_ptr(), hn.as_mut_ptr(), 76) };
    assert_eq!(st, QfStatus::Ok);
    let (mut bp, mut bn) = ([zero; 3], [zero; 3]);
    let st = unsafe { qf_plan_inverse(plan, hp.as_ptr(), hn.as_ptr(), 76, bp.as_mut_ptr(), bn.as_mut_ptr(), 3) };
    assert_eq!(st, QfStatus::Ok);
    for (a, b) in pos.iter().chain(&neg).zip(bp.iter().chain(&bn)) {
        assert!((a.re - b.re).abs() < 1e-12 && (a.im - b.im).abs() < 1e-12, "{a:?} vs {b:?}");
    }

    let st = unsafe { qf_plan_forward(plan, pos.as_ptr(), neg.as_ptr(), 2, hp.as_mut_ptr(), hn.as_mut_ptr(), 76) };
    assert_eq!(st, QfStatus::Grid);
    unsafe { qf_plan_free(plan) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(
        &src,
        "#include \"q2fourier.h\"\nint main(void) { QfComplex z; return qf_cos_alpha(0.5, 0.0, z, &z) == QF_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include]).arg(&src).status() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("no C compiler available ({e}); header not checked");
            return;
        }
    };
    assert!(status.success());
}
