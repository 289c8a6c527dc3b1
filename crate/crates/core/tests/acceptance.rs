use std::io::Write;
use std::time::{Duration, Instant};

use selmat_core::verify::{render, run_all, run_criterion, VerifyConfig};

/// Written straight to stderr so the line survives libtest's output capture.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn check(id: u32, budget: Duration) {
    let start = Instant::now();
    let r = run_criterion(id, &VerifyConfig::default());
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    report(&r.to_string());
    if !in_time {
        report(&format!("criterion {id:>2} FAIL: took {elapsed:?}, budget {budget:?}"));
    }
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
    assert!(in_time, "criterion {id} exceeded its time budget");
}

#[test]
fn criterion_01_integrals_against_quadrature() {
    check(1, Duration::from_secs(120));
}

#[test]
fn criterion_02_jack_tables() {
    check(2, Duration::from_secs(1));
}

#[test]
fn criterion_03_exact_expansions() {
    check(3, Duration::from_secs(10));
}

#[test]
fn criterion_04_variance_constants() {
    check(4, Duration::from_secs(120));
}

#[test]
fn criterion_05_beta_combination() {
    check(5, Duration::from_secs(60));
}

#[test]
fn criterion_06_thin_shell_constant() {
    check(6, Duration::from_secs(120));
}

#[test]
fn criterion_07_weingarten_values() {
    check(7, Duration::from_secs(30));
}

#[test]
fn criterion_08_covariance_structure() {
    check(8, Duration::from_secs(120));
}

#[test]
fn criterion_09_entry_correlations() {
    check(9, Duration::from_secs(60));
}

#[test]
fn criterion_10_sampling_concordance() {
    check(10, Duration::from_secs(300));
}

#[test]
fn criterion_11_determinism() {
    // Two complete seeded runs of the suite must render identically.
    let cfg = VerifyConfig::default();
    let a = render(&run_all(&cfg));
    let b = render(&run_all(&cfg));
    let same = a == b;
    report(&format!(
        "criterion 11 {}: determinism (two full verify runs byte-identical: {same})",
        if same { "PASS" } else { "FAIL" }
    ));
    assert!(same);
}
