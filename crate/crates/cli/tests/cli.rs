use std::process::{Command, Output};

use serde_json::Value;

fn selmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selmat"))
        .args(args)
        .env("SELMAT_THREADS", "2")
        .output()
        .expect("binary runs")
}

/// Records after the config header.
fn records(out: &Output) -> Vec<Value> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().expect("header")).unwrap();
    assert!(header.get("config").is_some());
    lines.map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn negcorr_record_has_exactly_three_exact_keys() {
    let recs = records(&selmat(&["negcorr", "--field", "c", "--n", "10"]));
    let expected: Value = serde_json::json!({
        "cross": "1/399",
        "same_row": "1/420",
        "second_moment_sq": "1/400",
    });
    assert_eq!(recs[0], expected);
}

#[test]
fn orthogonal_weingarten_transposition() {
    let recs = records(&selmat(&["weingarten", "orthogonal", "--k", "2", "--coset-type", "2", "--z", "5"]));
    assert_eq!(recs[0]["value"], "-1/140");
    assert!((recs[0]["value_f64"].as_f64().unwrap() + 1.0 / 140.0).abs() < 1e-15);
}

#[test]
fn unitary_weingarten_accepts_cycle_type_alias() {
    let recs = records(&selmat(&["weingarten", "unitary", "--k", "3", "--cycle-type", "1,1,1", "--z", "4"]));
    assert_eq!(recs[0]["value"], "7/360");
}

#[test]
fn rationals_round_trip_through_output() {
    let recs = records(&selmat(&["variance", "--ensemble", "her", "--n", "2,5,9"]));
    for r in &recs[..3] {
        let text = r["var"].as_str().unwrap();
        let (num, den) = text.split_once('/').unwrap_or((text, "1"));
        let approx = num.parse::<f64>().unwrap() / den.parse::<f64>().unwrap();
        assert!((approx - r["var_f64"].as_f64().unwrap()).abs() < 1e-15);
        // Feeding the printed value back in as an argument is accepted unchanged.
        let echo = records(&selmat(&["selberg", "--n", "1", "--u", "1", "--w", "1", "--kappa", text]));
        assert!(echo[0]["value"].is_string());
    }
    assert!(recs[3].get("extrapolated_limit").is_some());
}

#[test]
fn csv_output_starts_with_commented_config() {
    let out = selmat(&["--format", "csv", "negcorr", "--field", "r", "--n", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {\"config\""));
    assert_eq!(lines.next().unwrap(), "cross,same_row,second_moment_sq");
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        vec!["moments", "--ensemble", "nonsense", "--n", "3"],
        vec!["weingarten", "unitary", "--k", "3", "--type", "2,2", "--z", "4"],
        vec!["variance", "--ensemble", "her", "--n", "5..2:0"],
        vec!["selberg", "--n", "2", "--u", "-3", "--w", "1", "--kappa", "1"],
    ] {
        let out = selmat(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn seeded_oracle_output_is_reproducible() {
    let args = ["--seed", "7", "oracle", "haar", "unitary", "--n", "3", "--count", "4000", "--chains", "4"];
    let a = selmat(&args);
    let b = selmat(&args);
    assert_eq!(a.stdout, b.stdout);
    let recs = records(&a);
    assert!(recs[0]["z_score"].as_f64().unwrap().abs() < 5.0);
}
