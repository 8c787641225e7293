use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fqcycles"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fqcycles")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn workspace_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn count_full_plane() {
    let out = run(&["count", "--q", "5", "--d", "2", "--set", "full", "--cycles", "2", "--paths", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    // every point of F_5^2 has q - 1 = 4 neighbours at distance 1
    assert_eq!(v["counts"]["P_1"], "100");
    assert_eq!(v["counts"]["C_2"], "100");
    assert_eq!(v["input"]["size"], 25);
}

#[test]
fn count_with_oracle_and_trees() {
    let out = run(&[
        "count", "--q", "7", "--set", "randn:m=9", "--seed", "4", "--relation", "prod",
        "--cycles", "3,4,5", "--nondegenerate", "4", "--tree", "0;0,0;1,1", "--oracle",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["oracle_match"], true);
    assert!(v["counts"]["n_T[1,1]"].is_string());
}

#[test]
fn custom_relation_and_no_loops() {
    let with = json(&run(&["count", "--relation", "prod", "--t", "1", "--cycles", "2"]));
    let without = json(&run(&["count", "--relation", "prod", "--t", "1", "--cycles", "2", "--no-loops"]));
    assert!(with["edges"]["loops"].as_u64().unwrap() > 0);
    assert_eq!(without["edges"]["loops"], 0);
    let out = run(&["count", "--phi", "norm-sum", "--t", "2", "--cycles", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["input"]["relation"], "custom:norm-sum");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["count", "--q", "9"])), 1);
    assert_eq!(code(&run(&["verify", "--theorems", "NOPE"])), 1);
    assert_eq!(code(&run(&["count", "--set", "rand:p=2"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn resource_caps_exit_three() {
    assert_eq!(code(&run(&["count", "--q", "101", "--d", "4", "--set", "full"])), 3);
    assert_eq!(code(&run(&["count", "--cycles", "100"])), 3);
    assert_eq!(code(&run(&["trees", "--vertices", "12"])), 3);
}

#[test]
fn verify_and_sweep_report_each_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let tsv = dir.path().join("s.tsv");
    let out = run(&[
        "sweep", "--q", "5", "--d", "2", "--set", "randn:m=12", "--seed", "9",
        "--theorems", "EDGE,UPPER,RECURSION", "--repetitions", "6",
        "--csv", csv.to_str().unwrap(), "--tsv", tsv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let records = json(&out);
    assert_eq!(records.as_array().unwrap().len(), 6);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1 + 6 * 3);
    let tsv = fs::read_to_string(&tsv).unwrap();
    assert!(tsv.starts_with("# job\t"));

    let out = run(&["verify", "--q", "5", "--d", "3", "--set", "randn:m=110", "--theorems", "CHAINS", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)[0]["reports"][0];
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["hypothesis_satisfied"], true);
}

#[test]
fn spectra_and_trees() {
    let v = json(&run(&["spectra", "--q", "7", "--d", "2", "--all-t"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["passes"]["coeff"] == true));
    let s = json(&run(&["spectra", "--q", "5", "--smoothing"]));
    assert_eq!(s["within_c_bound"], true);

    let t = json(&run(&["trees", "--vertices", "5", "--embed", "--set", "randn:m=6"]));
    let classes = t["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 3);
    let labelings: u64 = classes.iter().map(|c| c["labelings"].as_u64().unwrap()).sum();
    assert_eq!(labelings, 125);
}

#[test]
fn selftest_is_byte_identical() {
    let a = run(&["selftest", "--seed", "3"]);
    let b = run(&["selftest", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn empty_config_writes_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out_path = dir.path().join("out.json");
    fs::write(&cfg, format!("{{\"jobs\": [], \"output\": {{\"json\": {:?}}}}}", out_path)).unwrap();
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&out_path).unwrap().trim(), "[]");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"jobs": [{"id": "a", "q": 5, "d": 2, "relation": "dist", "t": 1, "recipe": "full", "colour": 1}]}"#).unwrap();
    assert_eq!(code(&run(&["run", cfg.to_str().unwrap()])), 1);
}

#[test]
fn oracle_config_on_ten_tiny_instances() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"jobs": [{"id": "tiny", "q": 5, "d": 2, "relation": "prod", "t": 2,
            "recipe": "randn:m=7", "seed": 1, "repetitions": 10,
            "cycles": [3, 4, 5], "nondegenerate": [4], "trees": [[0, 0]], "oracle": true}]}"#,
    )
    .unwrap();
    let out = run(&["config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let records = json(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|r| r["oracle_match"] == true));
}

#[test]
fn bundled_acceptance_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("a.json");
    let out = run(&[
        "run",
        workspace_file("configs/acceptance.json").to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let records: Value = serde_json::from_str(&fs::read_to_string(json_path).unwrap()).unwrap();
    assert!(records.as_array().unwrap().iter().all(|r| r.get("error").is_none()));
}
