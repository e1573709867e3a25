//! Acceptance criteria 1–12, one line each. Criterion 6 is reported as
//! failing: its literal sign statement does not hold (see the adjunction
//! suite details); the test asserts the recorded per-degree outcome instead.

use std::collections::BTreeMap;

use cupcone::harness::{run_suites, Outcome, Report, RunConfig, SuiteName, SuiteReport};
use serde_json::Value;

struct Line {
    n: usize,
    pass: bool,
    msg: String,
}

fn line(n: usize, pass: bool, msg: impl Into<String>) -> Line {
    let l = Line { n, pass, msg: msg.into() };
    println!("criterion {:>2}: {} | {}", l.n, if l.pass { "PASS" } else { "FAIL" }, l.msg);
    l
}

fn ok(s: &SuiteReport) -> bool {
    matches!(s.outcome, Outcome::Pass | Outcome::DegeneratePass)
}

fn sign(s: &SuiteReport, key: &str) -> (Vec<i64>, String) {
    let r = &s.signs[key];
    (r.allowed.clone(), r.verdict.clone())
}

fn ms(r: &Report, s: SuiteName) -> u64 {
    r.timing_ms[s.as_str()]
}

fn full_config() -> RunConfig {
    let mut cfg = RunConfig::new(2024, SuiteName::ALL.to_vec(), 20);
    // the (Z/3)^3 instances that make adjunction and reciprocity nondegenerate
    cfg.pool.max_group_order = 27;
    let trials = [
        (SuiteName::Cup, 100),
        (SuiteName::Dual, 50),
        (SuiteName::Equalcup, 100),
        (SuiteName::Splitting, 100),
        (SuiteName::Selcho, 20),
        (SuiteName::Adjunction, 50),
        (SuiteName::Triangle, 30),
        (SuiteName::Reciprocity, 50),
        (SuiteName::Cyclo, 20),
    ];
    cfg.suite_trials = trials.into_iter().collect::<BTreeMap<_, _>>();
    cfg
}

#[test]
fn acceptance() {
    let r = run_suites(&full_config()).expect("config is valid");
    let s = |n: SuiteName| r.suite(n).expect("suite ran");
    let mut lines = Vec::new();

    let cup = s(SuiteName::Cup);
    let groups = cup.details["groups"].as_array().map_or(0, Vec::len);
    let moduli = cup.details["moduli"].as_array().map_or(0, Vec::len);
    let (eps, v) = sign(cup, "epsilon");
    lines.push(line(
        1,
        ok(cup) && eps == [1] && cup.instances >= 100 && groups >= 4 && moduli >= 3 && ms(&r, SuiteName::Cup) <= 60_000,
        format!("ε = {eps:?} ({v}) over {} extensions, {groups} groups, {moduli} moduli, {} ms", cup.instances, ms(&r, SuiteName::Cup)),
    ));

    let dual = s(SuiteName::Dual);
    let (eps, v) = sign(dual, "epsilon");
    lines.push(line(
        2,
        ok(dual) && eps == [-1] && dual.instances >= 50 && ms(&r, SuiteName::Dual) <= 60_000,
        format!("ε = {eps:?} ({v}) over {} dual extensions, {} ms", dual.instances, ms(&r, SuiteName::Dual)),
    ));

    let eq = s(SuiteName::Equalcup);
    let keys: Vec<String> = ["plain", "c", "f"].iter().flat_map(|f| (1..=2).map(move |i| format!("{f}-degree-{i}"))).collect();
    let all_plus = keys.iter().all(|k| eq.signs.get(k).is_some_and(|r| r.ok() && r.allowed.contains(&1)));
    let summary: Vec<String> = keys.iter().map(|k| format!("{k} {:?}", eq.signs[k].allowed)).collect();
    lines.push(line(
        3,
        ok(eq) && all_plus && eq.instances >= 100 && ms(&r, SuiteName::Equalcup) <= 300_000,
        format!("{} Selmer instances; {}", eq.instances, summary.join(", ")),
    ));

    let sp = s(SuiteName::Splitting);
    let jointly_false = sp.details["jointly_false"].as_u64().unwrap_or(0);
    lines.push(line(
        4,
        ok(sp) && sp.instances >= 100 && jointly_false >= 10 && sp.details["inconsistent"] == 0,
        format!("{} instances, {} local checks, {jointly_false} jointly false, {} inconsistent", sp.instances, sp.details["checks"], sp.details["inconsistent"]),
    ));

    let sc = s(SuiteName::Selcho);
    lines.push(line(
        5,
        ok(sc) && sc.instances >= 20 && sc.details["max_degree"] == 2,
        format!("{} (site, σ) pairs, degrees ≤ {}, {} cochains checked", sc.instances, sc.details["max_degree"], sc.structural.checks),
    ));

    // literal statement: one sign for every (i, j). The computed signs are
    // (−1)^{i+j}, so the literal form is inconsistent; (−1)^j is consistent.
    let adj = s(SuiteName::Adjunction);
    let (lit, lit_v) = sign(adj, "literal");
    let per_pair = adj.details["per_pair_allowed"].clone();
    let graded = &adj.details["graded"];
    lines.push(line(
        6,
        ok(adj),
        format!(
            "literal (−1)^i form: {lit_v} over {} instances; per (i,j) allowed {per_pair}; (−1)^j form: {} {}",
            adj.instances, graded["verdict"], graded["allowed"]
        ),
    ));
    assert_eq!(adj.instances, 50);
    assert_eq!(lit_v, "inconsistent", "{lit:?}");
    let expected: Value = serde_json::json!({ "00": [1], "01": [-1], "10": [-1], "11": [1] });
    assert_eq!(per_pair, expected);
    assert_eq!(graded["verdict"], "pass");
    assert_eq!(graded["allowed"], serde_json::json!([1]));
    assert_eq!(adj.structural.failures, Vec::<String>::new());

    let tr = s(SuiteName::Triangle);
    lines.push(line(
        7,
        ok(tr) && tr.instances >= 30 && tr.details["invalid_tested"].as_u64() > Some(0) && tr.details["invalid_tested"] == tr.details["invalid_rejected"],
        format!("{} valid triangles, {} of {} invalid ones rejected", tr.instances, tr.details["invalid_rejected"], tr.details["invalid_tested"]),
    ));

    let rc = s(SuiteName::Reciprocity);
    let (eps, v) = sign(rc, "outer-square");
    lines.push(line(
        8,
        ok(rc) && eps == [-1] && rc.instances >= 50 && ms(&r, SuiteName::Reciprocity) <= 300_000,
        format!(
            "ε = {eps:?} ({v}) over {} triples ({} nondegenerate), antisymmetry on all, {} ms",
            rc.instances,
            rc.details["nondegenerate_instances"],
            ms(&r, SuiteName::Reciprocity)
        ),
    ));

    let structural: Vec<&SuiteReport> = [
        SuiteName::Cup,
        SuiteName::Dual,
        SuiteName::Equalcup,
        SuiteName::Splitting,
        SuiteName::Selcho,
        SuiteName::Adjunction,
        SuiteName::Triangle,
        SuiteName::Reciprocity,
    ]
    .into_iter()
    .map(s)
    .collect();
    let checks: usize = structural.iter().map(|x| x.structural.checks).sum();
    let failures: Vec<&String> = structural.iter().flat_map(|x| &x.structural.failures).collect();
    lines.push(line(9, failures.is_empty() && checks > 0, format!("{checks} inline checks, {} failures {:?}", failures.len(), failures.first())));

    let rf = s(SuiteName::Reference);
    lines.push(line(10, rf.outcome == Outcome::Pass, format!("H(Z/3, Z/3) = {}, H_c dims {}", rf.details["h_z3"], rf.details["compact_dims"])));

    let cy = s(SuiteName::Cyclo);
    lines.push(line(
        11,
        cy.outcome == Outcome::Pass && ms(&r, SuiteName::Cyclo) <= 10_000,
        format!("irregular {}, {} Δ-modules, {} ms", cy.details["irregular"], cy.details["random_modules"], ms(&r, SuiteName::Cyclo)),
    ));

    let mut small = RunConfig::new(99, SuiteName::ALL.to_vec(), 4);
    small.suite_trials.insert(SuiteName::Cyclo, 20);
    let (a, b) = (run_suites(&small).unwrap(), run_suites(&small).unwrap());
    lines.push(line(12, a.body_json() == b.body_json() && a.hash == b.hash, format!("two runs, body hash {}", &a.hash[..16])));

    let failing: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.n).collect();
    println!("failing criteria: {failing:?}");
    assert_eq!(failing, vec![6], "only the literal adjunction statement is expected to fail");
}
