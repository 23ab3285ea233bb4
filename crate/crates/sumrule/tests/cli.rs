use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sumrule::report::strip_timestamp;

fn sumrule(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumrule"))
        .args(args)
        .env_remove("SUMRULE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn number(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "inf" => f64::INFINITY,
        other => other.as_f64().expect("a number"),
    }
}

/// Data rows of a CSV document, comment lines and header dropped.
fn csv_rows(text: &[u8]) -> Vec<Vec<String>> {
    let text = String::from_utf8(text.to_vec()).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn diagnostic(out: &Output) -> Value {
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    serde_json::from_str(stderr.lines().last().expect("a diagnostic line"))
        .expect("diagnostic is JSON")
}

#[test]
fn verify_semicircle_is_exact() {
    let out = sumrule(&["verify", "--ensemble", "hermite", "--measure", "sc"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "PASS");
    assert!(number(&r["abs_gap"]) < 1e-9);
    assert_eq!(r["header"]["command"], "verify");
    assert_eq!(r["header"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_rank_one_perturbation() {
    let out = sumrule(&[
        "verify",
        "--ensemble",
        "hermite",
        "--measure",
        "rank-one:c=0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((number(&r["sum_side"]["value"]) - 0.125).abs() < 1e-9);
    assert!((number(&r["spectral_side"]["value"]) - 0.125).abs() < 1e-9);
}

#[test]
fn verify_atom_at_hard_edge_is_infinite_on_both_sides() {
    let out = sumrule(&[
        "verify",
        "--ensemble",
        "laguerre",
        "--tau",
        "0.5",
        "--measure",
        "atom-at-zero",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "PASS-inf");
    assert_eq!(r["sum_side"]["value"], "inf");
    assert_eq!(r["spectral_side"]["value"], "inf");
}

#[test]
fn verify_fails_with_mismatched_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.csv");
    std::fs::write(&path, "k,a_k,b_k\n1,1,0.3\n2,1,0\n3,,0\n").unwrap();
    let out = sumrule(&[
        "verify",
        "--measure",
        "sc",
        "--coefficients",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "FAIL");
}

#[test]
fn verify_reads_a_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu.json");
    std::fs::write(
        &path,
        r#"{"kind": "equilibrium", "ac_mass": 0.9, "atoms_plus": [{"position": 2.5, "weight": 0.1}]}"#,
    )
    .unwrap();
    let out = sumrule(&["verify", "--measure", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    // -ln 0.9 + F+(2.5), with F+(2.5) = 1.25 * 1.5 - 2 ln 2
    let expected = -(0.9f64.ln()) + 1.875 - 2.0 * 2f64.ln();
    assert!((number(&r["spectral_side"]["value"]) - expected).abs() < 1e-9);
    assert!((number(&r["sum_side"]["value"]) - expected).abs() < 1e-9);
}

#[test]
fn sample_is_reproducible() {
    let args = [
        "sample",
        "--ensemble",
        "hermite",
        "--n",
        "100",
        "--beta",
        "2",
        "--seed",
        "7",
    ];
    for format in ["json", "csv"] {
        let mut a = args.to_vec();
        a.extend(["--format", format]);
        let first = sumrule(&a);
        let second = sumrule(&a);
        assert_eq!(first.status.code(), Some(0));
        let (x, y) = (
            String::from_utf8(first.stdout).unwrap(),
            String::from_utf8(second.stdout).unwrap(),
        );
        assert_eq!(strip_timestamp(&x), strip_timestamp(&y));
        assert!(x.contains("seed"));
    }
}

#[test]
fn jacobi_samples_lie_in_the_unit_interval() {
    let out = sumrule(&[
        "sample",
        "--ensemble",
        "jacobi-kn",
        "--n",
        "2000",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 2000);
    for row in rows {
        let x: f64 = row[1].parse().unwrap();
        assert!(x > 0.0 && x < 1.0, "{x}");
    }
}

#[test]
fn weighted_samples_sum_to_one() {
    let out = sumrule(&[
        "sample",
        "--ensemble",
        "laguerre",
        "--n",
        "80",
        "--weighted",
        "--format",
        "csv",
    ]);
    let total: f64 = csv_rows(&out.stdout)
        .iter()
        .map(|r| r[2].parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    let r = json(&sumrule(&["sample", "--n", "30", "--weighted"]));
    assert_eq!(r["eigenvalues"].as_array().unwrap().len(), 30);
    assert_eq!(r["coefficients"]["a"].as_array().unwrap().len(), 29);
}

#[test]
fn rates_agree_outside_the_support() {
    let out = sumrule(&[
        "rates",
        "--ensemble",
        "hermite",
        "--grid",
        "2.1:3.0:0.1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 10);
    for row in rows {
        let d: f64 = row[3].parse().unwrap();
        assert!(d < 1e-6, "{row:?}");
    }
}

#[test]
fn rates_inside_the_support_are_infinite() {
    let out = sumrule(&[
        "rates",
        "--x",
        "1.5",
        "--ensemble",
        "hermite",
        "--side",
        "plus",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let row = &r["rows"][0];
    assert_eq!(row["direct"], "inf");
    assert_eq!(row["effective"], "inf");
}

#[test]
fn probe_reports_decreasing_tail_fractions() {
    let out = sumrule(&[
        "probe",
        "--ensemble",
        "hermite",
        "--x",
        "2.2",
        "--nladder",
        "50,100,200",
        "--beta",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let p: Vec<f64> = r["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| number(&e["probability"]))
        .collect();
    assert_eq!(p.len(), 3);
    assert!(p[0] > p[1] && p[1] > p[2], "{p:?}");
    assert!((number(&r["target_rate"]) - 0.1210301).abs() < 1e-6);
}

#[test]
fn probe_csv_has_the_documented_columns() {
    let out = sumrule(&[
        "probe",
        "--x",
        "2.5",
        "--nladder",
        "10,20",
        "--draws",
        "200",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l == "n,p_hat,ci_lo,ci_hi,rate_estimate,target"));
}

#[test]
fn probe_inside_the_support_is_an_input_error() {
    let out = sumrule(&["probe", "--x", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"]["kind"], "precondition");
}

#[test]
fn config_files_run_and_bad_ones_are_diagnosed() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("run.json");
    let target = dir.path().join("out").join("table.csv");
    std::fs::write(
        &good,
        format!(
            r#"{{"command": "sample", "ensemble": {{"kind": "hermite"}}, "n": 10, "seed": 3,
               "output": {{"path": {:?}, "format": "csv"}}}}"#,
            target.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = sumrule(&["run", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(csv_rows(&std::fs::read(&target).unwrap()).len(), 10);

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"command": "sample", "ensemble": {"kind": "hermite"}, "n": "many"}"#,
    )
    .unwrap();
    let out = sumrule(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"]["kind"], "json");

    let out = sumrule(&["run", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"]["kind"], "io");
}

#[test]
fn usage_errors_are_machine_readable() {
    let out = sumrule(&["sample", "--n", "zero"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"]["kind"], "usage");
    let out = sumrule(&["sample", "--beta", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(sumrule(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sumrule"))
        .args(["sample", "--n", "5", "--format", "csv"])
        .env("SUMRULE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("sample.csv")).exists());
}

#[test]
fn schema_is_printed() {
    let out = sumrule(&["schema"]);
    let schema: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(schema["type"], "object");
}
