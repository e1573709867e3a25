use std::path::PathBuf;

use cupcone::harness::{run_site_file, run_site_text, run_suites, Outcome, RunConfig, SiteSuite, SuiteName};
use cupcone::Error;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn minimal() -> RunConfig {
    let mut cfg = RunConfig::new(7, vec![SuiteName::Cup], 5);
    cfg.pool.groups = vec!["Z/3".into()];
    cfg
}

#[test]
fn minimal_config_gives_one_suite_entry() {
    let r = run_suites(&minimal()).unwrap();
    assert_eq!(r.body.suites.len(), 1);
    let s = r.suite(SuiteName::Cup).unwrap();
    assert_eq!(s.instances, 5);
    assert!(!s.outcome.failed(), "{:?}", s.outcome);
    assert!(r.passed());
}

#[test]
fn same_seed_same_body() {
    let mut cfg = minimal();
    cfg.suites = vec![SuiteName::Cup, SuiteName::Dual, SuiteName::Selcho];
    let (a, b) = (run_suites(&cfg).unwrap(), run_suites(&cfg).unwrap());
    assert_eq!(a.body_json(), b.body_json());
    assert_eq!(a.hash, b.hash);
    cfg.seed += 1;
    assert_ne!(run_suites(&cfg).unwrap().hash, a.hash);
}

#[test]
fn worker_count_does_not_change_the_body() {
    let mut cfg = minimal();
    cfg.pool.groups = vec!["Z/2".into(), "S3".into()];
    cfg.bounds.workers = 1;
    let a = run_suites(&cfg).unwrap();
    cfg.bounds.workers = 3;
    let b = run_suites(&cfg).unwrap();
    assert_eq!(a.body.suites, b.body.suites);
}

#[test]
fn config_errors_name_the_key() {
    let e = RunConfig::from_toml("seed = 1\nsuites = [\"cup\", \"bogus\"]\n").unwrap_err();
    match e {
        Error::Config { path, msg } => {
            assert_eq!(path, "suites[1]");
            assert!(msg.contains("bogus"), "{msg}");
        }
        e => panic!("{e:?}"),
    }
    let e = RunConfig::from_toml("seed = 1\nsuites = [\"cup\"]\n[pool]\nmax_degre = 2\n").unwrap_err();
    assert!(matches!(e, Error::Config { ref path, .. } if path.starts_with("pool")), "{e:?}");
    let e = RunConfig::from_toml("seed = 1\nsuites = [\"cup\"]\n[pool]\ngroups = [\"Q8\"]\n").unwrap_err();
    assert!(matches!(e, Error::Config { ref path, .. } if path == "pool.groups[0]"), "{e:?}");
    let e = RunConfig::from_toml("seed = 1\nsuites = [\"cup\"]\n[bounds]\nmax_cells = 0\n").unwrap_err();
    assert!(matches!(e, Error::Config { ref path, .. } if path == "bounds.max_cells"), "{e:?}");
    let ok = RunConfig::from_toml("seed = 3\nsuites = [\"reference\"]\ntrials = 2\n[suite_trials]\ncup = 4\n").unwrap();
    assert_eq!(ok.trials_for(SuiteName::Cup), 4);
}

#[test]
fn reference_and_cyclo_suites_pass() {
    let cfg = RunConfig::new(1, vec![SuiteName::Reference, SuiteName::Cyclo], 3);
    let r = run_suites(&cfg).unwrap();
    for s in &r.body.suites {
        assert_eq!(s.outcome, Outcome::Pass, "{}", s.suite.as_str());
    }
}

#[test]
fn report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = minimal();
    cfg.output.report = Some(dir.path().join("r.json"));
    let r = run_suites(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["hash"], r.hash);
}

#[test]
fn bundled_site_file() {
    let r = run_site_file(&data("two_point_z3.toml")).unwrap();
    let c = r.suite(SiteSuite::Cohomology).unwrap();
    assert_eq!(c.details["compact_dims"], serde_json::json!([0, 1, 1, 1]));
    assert!(r.passed(), "{}", r.to_json_pretty());
}

#[test]
fn reciprocity_without_duality_data_skips_conditionals() {
    let r = run_site_file(&data("reciprocity_z3.toml")).unwrap();
    let s = r.suite(SiteSuite::Reciprocity).unwrap();
    assert_eq!(s.details["conditional"]["c1"], "skipped: no duality data");
    assert_eq!(s.details["conditional"]["c2"], "skipped: no duality data");
    assert!(!s.outcome.failed());
}

fn site_error(text: &str) -> (String, String) {
    match run_site_text(text) {
        Err(Error::Config { path, msg }) => (path, msg),
        r => panic!("{:?}", r.map(|r| r.hash)),
    }
}

const HEAD: &str = "modulus = 3\nsuites = [\"cohomology\"]\n";

#[test]
fn site_file_diagnostics() {
    let (p, m) = site_error(&format!("{HEAD}twist = [1, 1, 1]\n[group]\ntable = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]\n"));
    assert_eq!(p, "group.table");
    assert!(m.contains("associativity fails for the triple"), "{m}");
    let (p, m) = site_error(&format!("{HEAD}twist = [1, 2, 1]\n[group]\nname = \"Z/3\"\n"));
    assert_eq!(p, "twist");
    assert!(m.contains("not multiplicative"), "{m}");
    let local = "[[locals]]\nname = \"v\"\ntable = [[0, 1], [1, 0]]\nembedding = [0, 0]\n";
    let (p, m) = site_error(&format!("{HEAD}twist = [1, 1, 1, 1]\n[group]\nname = \"Z/4\"\n{local}"));
    assert_eq!(p, "locals[0].embedding");
    assert!(m.contains("not"), "{m}");
    let (p, _) = site_error(&format!("{HEAD}twist = [1, 1, 1]\n[group]\nname = \"Z/3\"\n[[locals]]\nname = \"v\"\nelements = [0, 1]\n"));
    assert_eq!(p, "locals[0].elements");
    let (p, _) = site_error(&format!("{HEAD}twist = [1, 1, 1]\n[group]\nname = \"Z/3\"\ncolour = 1\n"));
    assert_eq!(p, "group.colour");
}

#[test]
fn duality_data_is_checked() {
    let text = std::fs::read_to_string(data("reciprocity_z3.toml")).unwrap() + "\n[duality]\nh2c_to_x = [[0]]\nh3c_to_y = [[1]]\n";
    let (p, _) = site_error(&text);
    assert_eq!(p, "duality.h2c_to_x");
}
