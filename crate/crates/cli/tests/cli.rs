use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn noerlund(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noerlund"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn lcm_of_spike_with_and_without_tail_slope() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "spike.csv", "0\n1\n0.5\n0.5\n0\n0\n");

    let out = noerlund(&["lcm", "--input", "spike.csv", "--exact", "--format", "json"], dir.path());
    assert!(out.status.success());
    let c = &json(&out)["report"]["c"]["values"];
    assert_eq!(c, &serde_json::json!(["0", "1", "3/4", "1/2", "1/4", "0"]));

    let out = noerlund(&["lcm", "--input", "spike.csv", "--exact", "--tail-slope", "0", "--format", "json"], dir.path());
    assert!(out.status.success());
    let c = &json(&out)["report"]["c"]["values"];
    assert_eq!(c, &serde_json::json!(["0", "1", "1", "1", "1", "1"]));
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.csv", "1\n2\nfoo\n");
    let out = noerlund(&["lcm", "--input", "bad.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = noerlund(&["lcm"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["ensemble", "--count", "9", "--n", "256", "--seed", "3", "--format", "csv"];
    let a = noerlund(&args, dir.path());
    let b = noerlund(&args, dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = noerlund(&["ensemble", "--count", "9", "--n", "256", "--seed", "4", "--format", "csv"], dir.path());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cfg.toml", "n = 96\nformat = \"json\"\n");

    let out = noerlund(&["--config", "cfg.toml", "reproduce-6-10"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["header"]["horizon"], 96);

    let out = noerlund(&["--config", "cfg.toml", "reproduce-6-10", "--n", "64"], dir.path());
    assert_eq!(json(&out)["header"]["horizon"], 64);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cfg.toml", "horizon = 96\n");
    let out = noerlund(&["--config", "cfg.toml", "reproduce-6-10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let stdout = noerlund(&["reproduce-6-3", "--format", "json"], dir.path());
    let out = noerlund(&["reproduce-6-3", "--format", "json", "--out", "r.json"], dir.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("r.json")).unwrap(), stdout.stdout);
}

#[test]
fn reproduce_commands_pass() {
    let dir = TempDir::new().unwrap();
    let out = noerlund(&["reproduce-6-10", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["failures"].as_array().unwrap().is_empty());

    let out = noerlund(&["reproduce-6-3", "--format", "csv"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# {"));
    assert!(text.lines().any(|l| l == "# passed: true"));
}

#[test]
fn reproduce_rejects_tiny_horizon() {
    let dir = TempDir::new().unwrap();
    let out = noerlund(&["reproduce-6-10", "--n", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_majorant_on_cubes() {
    let dir = TempDir::new().unwrap();
    let cubes: String = (0..=1024u64).map(|n| format!("{}\n", (n + 1).pow(3))).collect();
    write(dir.path(), "cubes.csv", &cubes);
    let out = noerlund(&["build-majorant", "--input", "cubes.csv", "--p", "2", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["header"]["horizon"], 1024);
}

#[test]
fn build_majorant_fails_on_bounded_input() {
    let dir = TempDir::new().unwrap();
    let bounded: String = (0..=512).map(|n| format!("{}\n", 1.0 - 1.0 / (n as f64 + 1.0))).collect();
    write(dir.path(), "bounded.csv", &bounded);
    let out = noerlund(&["build-majorant", "--input", "bounded.csv", "--p", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cesaro_means_statuses() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "diag.txt", "3\n1 0 0\n0 0.3 0\n0 0 -0.5\n");
    write(dir.path(), "jordan.txt", "2\n1 1\n0 1\n");

    let out = noerlund(&["cesaro-means", "--input", "diag.txt", "--alpha", "1", "--n", "1000", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["report"]["status"], "converged");

    let out = noerlund(&["cesaro-means", "--input", "jordan.txt", "--alpha", "1", "--n", "500", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["status"], "diverged");
}

#[test]
fn single_stratum_ensembles() {
    let dir = TempDir::new().unwrap();
    for (stratum, status) in [("resolvent", "converged"), ("jordan", "diverged")] {
        let out = noerlund(
            &["ensemble", "--count", "6", "--n", "512", "--strata", stratum, "--weights", "cesaro:1,built:1", "--format", "json"],
            dir.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        let rows = v["report"]["rows"].as_array().expect("rows");
        assert_eq!(rows.len(), 12);
        for row in rows {
            assert_eq!(row["agrees"], true);
            let st = row["status"].as_str().unwrap();
            assert!(st == status || st == "undetermined", "{stratum}: {st}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // The CLI's float majorant dominates its input and is concave.
    #[test]
    fn lcm_output_dominates_and_is_concave(values in prop::collection::vec(-100i32..100, 2..40)) {
        let dir = TempDir::new().unwrap();
        let text: String = values.iter().map(|v| format!("{v}\n")).collect();
        write(dir.path(), "b.csv", &text);
        let out = noerlund(&["lcm", "--input", "b.csv", "--format", "json"], dir.path());
        prop_assert!(out.status.success());
        let v = json(&out);
        let c: Vec<f64> = v["report"]["c"]["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        prop_assert_eq!(c.len(), values.len());
        for (ci, bi) in c.iter().zip(&values) {
            prop_assert!(*ci >= *bi as f64 - 1e-9);
        }
        for w in c.windows(3) {
            prop_assert!(w[0] + w[2] <= 2.0 * w[1] + 1e-9);
        }
    }
}
