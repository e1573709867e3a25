use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cupcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cupcone")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn irregular() {
    let o = cupcone(&["cyclo", "irregular", "157"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["irregular"], serde_json::json!([62, 110]));
    let o = cupcone(&["cyclo", "irregular", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an odd prime"));
}

#[test]
fn eta() {
    let o = cupcone(&["cyclo", "eta", "5", "3", "1"]);
    assert_eq!(json(&o)["exponents"], serde_json::json!([1, 4, 4, 1]));
    assert_eq!(cupcone(&["cyclo", "eta", "5", "2", "1"]).status.code(), Some(2));
}

#[test]
fn validate_bundled_table() {
    let o = cupcone(&["cyclo", "validate", &data("synthetic_table.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["all_pass"], true);
    assert_eq!(r["rows"], 100);
}

#[test]
fn validate_flags_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    std::fs::write(&p, "p,k,kprime,val_kprime,val_k,yk_zero,ykprime_zero\n37,2,32,0,5,1,1\n37,2,32,1,36,1,1\n").unwrap();
    let o = cupcone(&["cyclo", "validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["antisymmetry_violations"], serde_json::json!([2]));
    std::fs::write(&p, "a,b\n1,2\n").unwrap();
    assert_eq!(cupcone(&["cyclo", "validate", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_runs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["verify", "--suite", "cup", "--suite", "reference", "--seed", "3", "--trials", "4", "--max-degree", "1"];
    let a = cupcone(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    let b = cupcone(&with_out);
    let (ja, jb) = (json(&a), json(&b));
    assert_eq!(ja["body"], jb["body"]);
    assert_eq!(ja["body"]["suites"].as_array().unwrap().len(), 2);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["hash"], ja["hash"]);
}

#[test]
fn verify_exit_codes() {
    let o = cupcone(&["verify", "--suite", "nope", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite `nope`"));
    // the literal adjunction sign is mismatched on the default pool
    let o = cupcone(&["verify", "--suite", "adjunction", "--seed", "1", "--trials", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["body"]["suites"][0]["outcome"]["status"], "fail");
}

#[test]
fn verify_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.toml");
    std::fs::write(&p, "seed = 5\nsuites = [\"dual\"]\ntrials = 3\n[pool]\ngroups = [\"Z/2\", \"Z/3\"]\nmoduli = [3]\n").unwrap();
    let o = cupcone(&["verify", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["body"]["config"]["seed"], 5);
    std::fs::write(&p, "seed = 5\nsuites = [\"dual\"]\n[pool]\nmoduli = [1]\n").unwrap();
    let o = cupcone(&["verify", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pool.moduli[0]"));
}

#[test]
fn site_run_bundled() {
    let o = cupcone(&["site", "run", &data("two_point_z3.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    let coh = r["body"]["suites"].as_array().unwrap().iter().find(|s| s["suite"] == "cohomology").unwrap().clone();
    assert_eq!(coh["details"]["compact_dims"], serde_json::json!([0, 1, 1, 1]));
}

#[test]
fn site_run_bad_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.toml");
    std::fs::write(&p, "modulus = 3\ntwist = [1, 1, 1]\nsuites = [\"cohomology\"]\n[group]\ntable = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]\n").unwrap();
    let o = cupcone(&["site", "run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("group.table") && err.contains("triple"), "{err}");
}
