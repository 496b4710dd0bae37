//! End-to-end CLI tests: flags, config file, report formats, exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triblucas"))
}

#[test]
fn search_finds_131() {
    let out = bin().args(["search", "--n-max", "10"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["n"], 8);
    assert_eq!(sols[0]["value"], "131");
    assert_eq!(v["verdict"], "inconclusive");
    assert!(v["initial_bounds"].is_null());
}

#[test]
fn search_empty_below_eight() {
    let out = bin().args(["search", "--n-max", "7"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 0);
}

#[test]
fn bounds_text_format() {
    let out = bin()
        .args(["bounds", "--format", "text", "--precision", "120"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("initial bounds"));
    assert!(text.contains("n <"));
    assert!(!text.contains("EXCEEDED"));
}

#[test]
fn rejects_invalid_range() {
    let out = bin().args(["search", "--n-max", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join("triblucas-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.toml");
    std::fs::write(&path, "n_low_max = 9\noutput_format = \"text\"\n").unwrap();
    // config file alone: text format
    let out = bin()
        .args(["search", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n=8"));
    // flag overrides the file's format
    let out = bin()
        .args([
            "search",
            "--config",
            path.to_str().unwrap(),
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(serde_json::from_slice::<serde_json::Value>(&out.stdout).is_ok());
}

/// Toy modulus: every phase runs, bounds come out tiny, but M no longer
/// dominates the derived 2l+m bound, so the verdict is inconclusive and the
/// exit code is 2.
#[test]
fn toy_modulus_verify_is_inconclusive() {
    let dir = std::env::temp_dir().join("triblucas-cli-test-toy");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toy.toml");
    std::fs::write(&path, "m_round1 = \"1e6\"\nprecision_digits = 250\n").unwrap();
    let out = bin()
        .args(["verify", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "inconclusive");
    // toy reduction chain: l <= 10, m <= 12, n <= 52
    assert_eq!(v["rounds"][0]["bound"], "10");
    assert_eq!(v["rounds"][1]["bound"], "12");
    assert_eq!(v["rounds"][2]["bound"], "52");
    let notes = v["notes"].to_string();
    assert!(notes.contains("below the derived 2l+m bound"));
}

/// A window too small for the reduced bound cannot conclude.
#[test]
fn short_window_verify_is_inconclusive() {
    let dir = std::env::temp_dir().join("triblucas-cli-test-win");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toy.toml");
    std::fs::write(&path, "m_round1 = \"1e6\"\n").unwrap();
    let out = bin()
        .args([
            "verify",
            "--config",
            path.to_str().unwrap(),
            "--n-max",
            "40",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "inconclusive");
    // the searched window still contains the solution
    assert_eq!(v["solutions"][0]["n"], 8);
    // reduced bound exceeds the window, so no contradiction
    let bound: i64 = v["rounds"][2]["bound"].as_str().unwrap().parse().unwrap();
    assert!(bound > 40);
}

/// Deliberately starved precision: the pipeline must record exhaustions and
/// retry at doubled precision until the expansion reaches deep enough.
#[test]
fn starved_precision_retries_and_verifies() {
    let out = bin()
        .args(["verify", "--precision", "30"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["config"]["precision_digits"], 30);
    let effective = v["config"]["effective_precision"].as_u64().unwrap();
    assert!(effective >= 60, "must have retried above 30 digits");
    let notes = v["notes"].to_string();
    assert!(notes.contains("precision exhausted at 30 digits"));
}
