//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values so `cargo test --test acceptance -- --nocapture` reads as
//! a report.

use gemo::verify::{self, CriterionResult, VerifyOptions};

fn report(c: CriterionResult) {
    println!("criterion {} {}: {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title);
    for check in &c.checks {
        let limit = match (check.min, check.max) {
            (Some(lo), Some(hi)) => format!("in [{lo:e}, {hi:e}]"),
            (_, Some(hi)) => format!("<= {hi:e}"),
            _ => String::new(),
        };
        println!("  {} {} = {:e} {limit}", if check.passed { "ok  " } else { "FAIL" }, check.name, check.measured);
    }
    if let Some(e) = &c.error {
        println!("  error: {e}");
    }
    assert!(c.passed, "criterion {} failed", c.id);
}

#[test]
fn criterion_1_example_1_z_space() {
    report(verify::criterion_1(VerifyOptions::default()));
}

#[test]
fn criterion_1_detects_perturbed_alpha() {
    let c = verify::criterion_1(VerifyOptions { perturb_alpha: Some(1.01) });
    let worst = c.checks.iter().filter(|k| k.name.contains("relative error")).map(|k| k.measured).fold(0.0, f64::max);
    println!("criterion 1 with α = 1.01: {} (max relative error {worst:e})", if c.passed { "PASS" } else { "FAIL" });
    assert!(!c.passed);
    assert!((worst - 0.0201).abs() < 1e-3, "{worst}");
}

#[test]
fn criterion_2_example_1_x_space() {
    report(verify::criterion_2());
}

#[test]
fn criterion_3_example_2() {
    report(verify::criterion_3());
}

#[test]
fn criterion_4_uncertainty() {
    report(verify::criterion_4());
}

#[test]
fn criterion_5_operator_identities() {
    report(verify::criterion_5());
}

#[test]
fn criterion_6_pct_loop_closure() {
    report(verify::criterion_6());
}

#[test]
fn criterion_7_figures() {
    report(verify::criterion_7());
}

#[test]
fn criterion_8_eigensolver_oracles() {
    report(verify::criterion_8());
}
