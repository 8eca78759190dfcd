use std::process::{Command, Output};

use serde_json::Value;

fn fusionmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionmod"))
        .args(args)
        .env_remove("FUSIONMOD_CACHE")
        .output()
        .expect("run fusionmod")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn alcove_json() {
    let out = fusionmod(&["alcove", "--n", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 3);
    assert_eq!(v["weights"].as_array().unwrap().len(), 6);
}

#[test]
fn alcove_csv_and_md() {
    let csv = String::from_utf8(fusionmod(&["--format", "csv", "alcove", "--n", "2", "--k", "1"]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("index,partition,dynkin,conformal_weight"));
    let md = String::from_utf8(fusionmod(&["alcove", "--n", "2", "--k", "1", "--format", "md"]).stdout).unwrap();
    assert!(md.lines().nth(1).unwrap().starts_with("|---|"));
}

#[test]
fn invariant_with_check() {
    let out = fusionmod(&["invariant", "--n", "4", "--k", "4", "--d", "2", "--sign", "minus", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["label"], "Z(2,-)");
    assert_eq!(v["check"]["physical"], true);
}

#[test]
fn identity_invariant() {
    let v = json(&fusionmod(&["invariant", "--n", "3", "--k", "2", "--d", "1"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert!(entries.iter().all(|e| e[0] == e[1] && e[2] == 1));
}

#[test]
fn sl66_named_invariant() {
    let out = fusionmod(&["invariant", "--case", "sl6-6", "--label", "M9", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["label"], "M9");
}

#[test]
fn invalid_config_exits_2() {
    assert_eq!(fusionmod(&["alcove", "--n", "1", "--k", "2"]).status.code(), Some(2));
    assert_eq!(fusionmod(&["invariant", "--n", "3", "--k", "3", "--d", "2"]).status.code(), Some(2));
    assert_eq!(fusionmod(&["branch", "--embedding", "nope"]).status.code(), Some(2));
    assert_eq!(fusionmod(&["alcove", "--n", "3"]).status.code(), Some(2));
    assert_eq!(fusionmod(&["invariant", "--case", "sl6-6", "--label", "M99"]).status.code(), Some(2));
}

#[test]
fn branch_list_and_check() {
    let names = json(&fusionmod(&["branch", "--list"]));
    assert!(names.as_array().unwrap().iter().any(|n| n == "sl6_6_sp20"));
    let out = fusionmod(&["branch", "--embedding", "sl3_9_e6", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["check"]["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_counts() {
    let v = json(&fusionmod(&["classify", "--n", "6", "--k", "6"]));
    assert_eq!(v["count"], 16);
    let v = json(&fusionmod(&["classify", "--n", "5", "--k", "5"]));
    assert_eq!(v["count"], 12);
    assert_eq!(v["labels"].as_array().unwrap().len(), 12);
    let out = fusionmod(&["classify", "--n", "6", "--k", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "pointed-only");
    assert_eq!(v["count"], 8);
    assert_eq!(v["coset_sum"], 8);
}

#[test]
fn cosets_table() {
    let v = json(&fusionmod(&["cosets", "--n", "3", "--k", "9"]));
    assert_eq!(v["total"], 8);
    let v = json(&fusionmod(&["cosets", "--n", "6", "--k", "10"]));
    assert_eq!(v["total"], 8);
}

#[test]
fn sl66_table_matches() {
    let out = fusionmod(&["table", "--case", "sl6-6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matches_printed"], true);
    assert_eq!(v["cells"][8][8], "16M9");
    let md = String::from_utf8(fusionmod(&["table", "--case", "sl6-6", "--format", "md"]).stdout).unwrap();
    assert_eq!(md.lines().count(), 18);
}

#[test]
fn generic_table() {
    let out = fusionmod(&["table", "--case", "generic", "--n", "6", "--k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 64);
    assert_eq!(fusionmod(&["table", "--case", "generic"]).status.code(), Some(2));
}

#[test]
fn verify_report_is_deterministic() {
    let a = fusionmod(&["verify", "--suite", "cosets"]);
    let b = fusionmod(&["verify", "--suite", "cosets"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["suite"], "cosets");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_failure_exits_1() {
    // the printed (4,4) dependencies are not reproduced; see the README
    let out = fusionmod(&["verify", "--suite", "invariants", "--n-max", "4", "--k-max", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let failing: Vec<String> = json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failing, vec!["dependencies of generic invariants"]);
}

#[test]
fn cache_dir_round_trip() {
    let dir = std::env::temp_dir().join(format!("fusionmod-cli-test-{}", std::process::id()));
    let args = ["--cache-dir", dir.to_str().unwrap(), "invariant", "--n", "3", "--k", "4", "--d", "1", "--check"];
    let first = fusionmod(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(std::fs::read_dir(&dir).unwrap().count() > 0);
    let second = fusionmod(&args);
    assert_eq!(first.stdout, second.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
