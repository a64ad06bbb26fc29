use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gemo(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gemo")).args(args).current_dir(dir).output().unwrap()
}

const EX1: &str = "deformation = quadratic\nalpha = 1\nspace = z\nstates = 3\ngrid_n = 512\n";

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.cfg"), format!("{EX1}out = a\n")).unwrap();
    fs::write(dir.path().join("b.cfg"), format!("{EX1}out = b\n")).unwrap();
    for cfg in ["a.cfg", "b.cfg"] {
        let out = gemo(&["solve", cfg], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["states.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let json = fs::read_to_string(dir.path().join("a/spectrum.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let e0 = v["solves"][0]["eigenvalues"][0].as_f64().unwrap();
    assert!((e0 - 0.5).abs() < 1e-4, "{e0}");
}

#[test]
fn overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.cfg"), EX1).unwrap();
    let out = gemo(&["solve", "c.cfg", "--alpha", "2", "--states", "1", "--out", "o"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let e0: f64 = stdout.lines().next().unwrap().split(' ').nth(2).unwrap().parse().unwrap();
    assert!((e0 - 2.0).abs() < 1e-3, "{stdout}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "deformation = nope\n").unwrap();
    let out = gemo(&["solve", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error [config]:"));

    let out = gemo(&["solve", "absent.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_check_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let out = gemo(&["parse-check", "1/(1+x"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error [expr]") && err.contains("byte 7"), "{err}");

    let out = gemo(&["parse-check", "exp(-g*x)-1", "--param", "g"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("exp(-g*x)-1\n"));
}

#[test]
fn figure_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = gemo(&["figure", "fig1", "--out", "f"], dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("f/fig1.csv")).unwrap();
    assert!(csv.starts_with("x,rho_1,rho_2,rho_3,rho_4\n"));
    assert_eq!(csv.lines().count(), 1 + 513);
    assert!(dir.path().join("f/fig1.json").exists());
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = gemo(&["verify", "--json", "v.json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);

    let out = gemo(&["verify", "--perturb-alpha", "1.01"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL criterion 1"));
}
