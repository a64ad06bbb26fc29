use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use gemo_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gemo_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn builtin_triple_and_map() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(gemo_deformation_builtin(GemoBuiltin::Quadratic, 2.0, &mut d), GemoStatus::Ok);
        let mut t = GemoTriple::default();
        assert_eq!(gemo_deformation_eval(d, 0.5, &mut t), GemoStatus::Ok);
        assert_eq!(t, GemoTriple { mu: 1.0, mu1: 4.0, mu2: 8.0 });

        let mut m = ptr::null_mut();
        assert_eq!(gemo_map_new(d, &mut m), GemoStatus::Ok);
        let (mut z, mut x) = (0.0, 0.0);
        assert_eq!(gemo_map_forward(m, 3.0, &mut z), GemoStatus::Ok);
        assert!((z - 6f64.atan() / 2.0).abs() < 1e-12);
        assert_eq!(gemo_map_inverse(m, z, &mut x), GemoStatus::Ok);
        assert!((x - 3.0).abs() < 1e-10);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(gemo_map_image(m, &mut lo, &mut hi), GemoStatus::Ok);
        assert!((hi - std::f64::consts::PI / 4.0).abs() < 1e-9 && (lo + hi).abs() < 1e-12);
        assert_eq!(gemo_map_inverse(m, 1.0, &mut x), GemoStatus::Input);
        assert!(!last_error().is_empty());

        gemo_map_free(m);
        gemo_deformation_free(d);
    }
}

#[test]
fn expression_with_parameters() {
    let expr = CString::new("exp(-g*x)-1").unwrap();
    let name = CString::new("g").unwrap();
    let names = [name.as_ptr()];
    let values = [1.0];
    unsafe {
        let mut d = ptr::null_mut();
        let s = gemo_deformation_from_expr(expr.as_ptr(), names.as_ptr(), values.as_ptr(), 1, -5.0, 5.0, &mut d);
        assert_eq!(s, GemoStatus::Ok, "{}", last_error());
        let mut t = GemoTriple::default();
        assert_eq!(gemo_deformation_eval(d, 1.0, &mut t), GemoStatus::Ok);
        let e = (-1f64).exp();
        assert!((t.mu - (e - 1.0)).abs() < 1e-15 && (t.mu1 + e).abs() < 1e-15 && (t.mu2 - e).abs() < 1e-15);
        assert_eq!(gemo_deformation_eval(d, 6.0, &mut t), GemoStatus::Input);
        gemo_deformation_free(d);

        let bad = CString::new("1/(1+x").unwrap();
        let s = gemo_deformation_from_expr(bad.as_ptr(), ptr::null(), ptr::null(), 0, -1.0, 1.0, &mut d);
        assert_eq!(s, GemoStatus::Input);
        assert!(last_error().contains("byte 7"), "{}", last_error());
    }
}

#[test]
fn solve_through_handle() {
    let cfg = CString::new("deformation = quadratic\nalpha = 1\nspace = z\nstates = 3\ngrid_n = 1024\n").unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gemo_solve(cfg.as_ptr(), &mut s), GemoStatus::Ok, "{}", last_error());
        assert_eq!(gemo_spectrum_solves(s), 1);
        let mut count = 0;
        assert_eq!(gemo_spectrum_eigenvalues(s, 0, ptr::null_mut(), 0, &mut count), GemoStatus::Ok);
        assert_eq!(count, 3);
        let mut buf = [0.0; 3];
        assert_eq!(gemo_spectrum_eigenvalues(s, 0, buf.as_mut_ptr(), 3, &mut count), GemoStatus::Ok);
        for (e, want) in buf.iter().zip([0.5, 2.0, 4.5]) {
            assert!((e - want).abs() / want < 1e-4, "{e}");
        }
        assert_eq!(gemo_spectrum_eigenvalues(s, 1, buf.as_mut_ptr(), 3, &mut count), GemoStatus::InvalidArgument);
        gemo_spectrum_free(s);

        let bad = CString::new("grid_n = 7\n").unwrap();
        assert_eq!(gemo_solve(bad.as_ptr(), &mut s), GemoStatus::Input);
        assert!(last_error().starts_with("error [config]"), "{}", last_error());
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(gemo_solve(ptr::null(), ptr::null_mut()), GemoStatus::InvalidArgument);
        assert_eq!(gemo_deformation_eval(ptr::null(), 0.0, ptr::null_mut()), GemoStatus::InvalidArgument);
        assert_eq!(gemo_spectrum_solves(ptr::null()), 0);
        gemo_deformation_free(ptr::null_mut());
        gemo_map_free(ptr::null_mut());
        gemo_spectrum_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(gemo_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/gemo.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["gemo_solve", "gemo_map_inverse", "gemo_last_error", "GEMO_STATUS_INPUT"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(out) = Command::new("cc").args(["-std=c99", "-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        return; // no C compiler available
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
