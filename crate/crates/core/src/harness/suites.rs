use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::dump::{ExtensionDump, SiteDump};
use super::{Outcome, RunConfig, SignRecord, Structural, SuiteName, SuiteReport};
use crate::cyclo::{
    bernoulli_mod, bernoulli_mod_power_sums, eigenspace_idempotents, eta_exponents, irregular_indices, random_delta_module,
    synthetic_table_csv, validate_pairing_table, CycloContext, PairingTable,
};
use crate::error::{Error, Result};
use crate::extensions::{cupprodconn_samples, dual_extension, dual_samples, SplitExtension};
use crate::groupcoh::cochain::cochain_moduli;
use crate::groupcoh::standard::{cochain_complex, pointwise_map};
use crate::groupcoh::{cone, cup, differential, Cochain, FiniteGroup, GModule, Triangle};
use crate::modlin::zn::is_prime;
use crate::modlin::{FinAbModule, ModuleHom};
use crate::pools::random_module;
use crate::sign::{Sign, SignSet, SignTally};
use crate::site::instances::{elementary_augmentation, random_selmer, random_site, two_point_z3, z2_in_s3};
use crate::site::model::Local;
use crate::site::reciprocity::{elementary_reciprocity, random_reciprocity};
use crate::site::{
    reciprocity_suite, splitting_suite, twist_identification, Flavor, LeibnizSetup, SelmerData, SiteModel, TwistStatus,
};

pub(super) fn run(cfg: &RunConfig, s: SuiteName) -> SuiteReport {
    let r = match s {
        SuiteName::Cup => cup_suite(cfg),
        SuiteName::Dual => dual_suite(cfg),
        SuiteName::Equalcup => equalcup_suite(cfg),
        SuiteName::Splitting => splitting(cfg),
        SuiteName::Selcho => selcho(cfg),
        SuiteName::Adjunction => adjunction(cfg),
        SuiteName::Triangle => triangle(cfg),
        SuiteName::Reciprocity => reciprocity(cfg),
        SuiteName::Reference => reference(cfg),
        SuiteName::Cyclo => cyclo(cfg),
    };
    r.unwrap_or_else(|e| {
        let outcome = match e {
            Error::SizeLimit(m) => Outcome::Skipped { reason: format!("resource bound: {m}") },
            e => Outcome::Fail { reason: e.to_string(), counterexample: None },
        };
        SuiteReport { suite: s, outcome, instances: 0, signs: BTreeMap::new(), structural: Structural::default(), details: json!(null) }
    })
}

/// Instance `k` of a suite on its own random stream, in parallel, in order.
fn par<T: Send>(cfg: &RunConfig, s: SuiteName, n: usize, f: impl Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(|k| f(k, &mut cfg.rng(s, k))).collect()
}

/// Round-robin over the group and modulus pools, so every entry is used.
fn pick(groups: &[Arc<FiniteGroup>], moduli: &[i64], k: usize) -> (Arc<FiniteGroup>, i64) {
    (groups[k % groups.len()].clone(), moduli[(k / groups.len()) % moduli.len()])
}

#[derive(Default)]
struct Tallies {
    map: BTreeMap<String, (SignTally, Sign)>,
}

impl Tallies {
    fn record(&mut self, key: &str, expected: Sign, k: usize, s: SignSet) {
        self.map.entry(key.to_string()).or_insert_with(|| (SignTally::default(), expected)).0.record(k, s);
    }

    fn records(&self) -> BTreeMap<String, SignRecord> {
        self.map.iter().map(|(k, (t, e))| (k.clone(), SignRecord::new(t, *e))).collect()
    }

    /// The first failing key and the instance that excluded its expected sign.
    fn first_bad(&self) -> Option<(String, Option<usize>)> {
        self.map.iter().find(|(_, (t, e))| !SignRecord::new(t, *e).ok()).map(|(k, (t, e))| {
            let by = match e {
                Sign::Plus => t.excluded_plus_by,
                Sign::Minus => t.excluded_minus_by,
            };
            (k.clone(), by)
        })
    }

    fn all_degenerate(&self) -> bool {
        self.map.values().all(|(t, _)| t.allowed.is_all())
    }
}

fn finish(
    suite: SuiteName,
    instances: usize,
    tallies: &Tallies,
    structural: Structural,
    mut extra_failure: Option<(String, Option<serde_json::Value>)>,
    dump: impl Fn(usize) -> serde_json::Value,
    details: serde_json::Value,
) -> SuiteReport {
    if extra_failure.is_none() {
        if let Some((key, by)) = tallies.first_bad() {
            let r = SignRecord::new(&tallies.map[&key].0, tallies.map[&key].1);
            extra_failure = Some((
                format!("sign `{key}`: {} (allowed {:?}, expected {})", r.verdict, r.allowed, r.expected),
                by.map(|k| json!({ "instance": k, "data": dump(k) })),
            ));
        }
    }
    if extra_failure.is_none() && !structural.failures.is_empty() {
        extra_failure = Some((format!("structural check failed: {}", structural.failures[0]), None));
    }
    let outcome = match extra_failure {
        Some((reason, counterexample)) => Outcome::Fail { reason, counterexample },
        None if !tallies.map.is_empty() && tallies.all_degenerate() => Outcome::DegeneratePass,
        None => Outcome::Pass,
    };
    SuiteReport { suite, outcome, instances, signs: tallies.records(), structural, details }
}

fn random_cochain<R: Rng + ?Sized>(m: &GModule, degree: usize, rng: &mut R) -> Cochain {
    let values = cochain_moduli(m.group.order(), degree, &m.module).iter().map(|&q| rng.gen_range(0..q)).collect();
    Cochain { degree, rank: m.rank(), values }
}

/// `d(f ∪ g) = df ∪ g + (−1)^i f ∪ dg` on random cochains.
fn plain_leibniz<R: Rng + ?Sized>(gm: &GModule, gn: &GModule, i: usize, j: usize, rng: &mut R) -> Result<()> {
    let (gl, tm) = GModule::tensor(gm, gn);
    let pairing = tm.pairing();
    let g = &gm.group;
    let (f, h) = (random_cochain(gm, i, rng), random_cochain(gn, j, rng));
    let lhs = differential(&gl, &cup(g, &f, &h, gn, &pairing));
    let t1 = cup(g, &differential(gm, &f), &h, gn, &pairing);
    let t2 = cup(g, &f, &differential(gn, &h), gn, &pairing);
    let moduli = cochain_moduli(g.order(), i + j + 1, &gl.module);
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let ok = lhs.values.iter().zip(&t1.values).zip(&t2.values).zip(&moduli).all(|(((&l, &a), &b), &m)| (l - a - sign * b).rem_euclid(m) == 0);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("Leibniz rule fails for ∪ in degrees ({i}, {j})")))
    }
}

fn random_extension<R: Rng + ?Sized>(g: &Arc<FiniteGroup>, n: i64, cap: usize, rng: &mut R) -> Result<SplitExtension> {
    let a = random_module(g, n, rng);
    let c = random_module(g, n, rng);
    let e = SplitExtension::random(&a, &c, rng, cap)?;
    if rng.gen_bool(0.3) {
        let s = e.random_section(rng);
        return e.with_section(s);
    }
    Ok(e)
}

fn names(groups: &[Arc<FiniteGroup>], used: usize) -> Vec<String> {
    groups.iter().take(used).map(|g| g.name().to_string()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn cup_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Cup));
    let top = cfg.pool.max_degree.min(2);
    let runs = par(cfg, SuiteName::Cup, n, |k, rng| {
        let (g, m) = pick(&groups, &cfg.pool.moduli, k);
        let e = random_extension(&g, m, cap, rng)?;
        let mut samples = Vec::new();
        for i in 0..=top {
            samples.extend(cupprodconn_samples(&e, i, 2, rng, cap)?.into_iter().map(|s| (i, s.allowed)));
        }
        let mut st = Structural::default();
        st.record("long exact sequence", e.long_exact(top, cap).map(|_| ()));
        st.record("Leibniz ∪", plain_leibniz(&e.c, &e.a, 1, 1, rng));
        Ok((e, samples, st))
    })?;
    let mut t = Tallies::default();
    let mut st = Structural::default();
    for (k, (_, samples, s)) in runs.iter().enumerate() {
        for &(i, set) in samples {
            t.record("epsilon", Sign::Plus, k, set);
            t.record(&format!("degree-{i}"), Sign::Plus, k, set);
        }
        st.merge(s.clone());
    }
    let moduli: BTreeSet<i64> = (0..n).map(|k| pick(&groups, &cfg.pool.moduli, k).1).collect();
    let details = json!({ "groups": names(&groups, n), "moduli": moduli, "degrees": (0..=top).collect::<Vec<_>>() });
    Ok(finish(SuiteName::Cup, n, &t, st, None, |k| json!(ExtensionDump::new(&runs[k].0)), details))
}

fn dual_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Dual));
    let top = cfg.pool.max_degree.min(1);
    let runs = par(cfg, SuiteName::Dual, n, |k, rng| {
        let (g, m) = pick(&groups, &cfg.pool.moduli, k);
        let e = random_extension(&g, m, cap, rng)?;
        let d = dual_extension(&e)?;
        let mut samples = Vec::new();
        for i in 0..=top {
            samples.extend(dual_samples(&d, i, 2, rng, cap)?.into_iter().map(|s| (i, s.allowed)));
        }
        let mut st = Structural::default();
        st.record("dual cocycle formula", if d.displayed_formula_holds() { Ok(()) } else { Err(Error::InvalidExtension("χ* ≠ −χ^∨".into())) });
        st.record("long exact sequence (dual)", d.ext.long_exact(top, cap).map(|_| ()));
        Ok((e, samples, st))
    })?;
    let mut t = Tallies::default();
    let mut st = Structural::default();
    for (k, (_, samples, s)) in runs.iter().enumerate() {
        for &(i, set) in samples {
            t.record("epsilon", Sign::Minus, k, set);
            t.record(&format!("degree-{i}"), Sign::Minus, k, set);
        }
        st.merge(s.clone());
    }
    let details = json!({ "groups": names(&groups, n) });
    Ok(finish(SuiteName::Dual, n, &t, st, None, |k| json!(ExtensionDump::new(&runs[k].0)), details))
}

fn selmer_dump(d: &SelmerData) -> serde_json::Value {
    json!({
        "extension": ExtensionDump::new(&d.base),
        "site": SiteDump::new(&d.site),
        "phis": d.phis.iter().map(|p| p.matrix.to_rows()).collect::<Vec<_>>(),
    })
}

/// Leibniz for `∪_c` and `_c∪` with `M = A`, `N = C` of the instance.
fn compact_leibniz<R: Rng + ?Sized>(d: &SelmerData, cap: usize, rng: &mut R, st: &mut Structural) -> Result<()> {
    let (site, gm, gn) = (&d.site, &d.ext.a, &d.ext.c);
    let (gl, tm) = GModule::tensor(gm, gn);
    let pairing = tm.pairing();
    let top = 3;
    let xm = cochain_complex(gm, top, cap)?;
    let xn = cochain_complex(gn, top, cap)?;
    let (cm, cn, cl) = (site.compact_complex(gm, top, cap)?, site.compact_complex(gn, top, cap)?, site.compact_complex(&gl, top, cap)?);
    let left = LeibnizSetup { site, gm, gn, pairing: &pairing, compact_factor: &cn, global_factor: &xm, target: &cl };
    let right = LeibnizSetup { site, gm, gn, pairing: &pairing, compact_factor: &cm, global_factor: &xn, target: &cl };
    for (i, j) in [(0, 1), (1, 0), (1, 1)] {
        st.record("Leibniz ∪_c", left.check_cup_c(i, j, rng));
        st.record("Leibniz _c∪", right.check_cup_lc(j, i, rng));
    }
    st.record("C/C_l/C_c long exact sequence", cl.long_exact().map(|_| ()));
    st.record("d² = 0 on C_c", cl.cc.check_d2());
    Ok(())
}

fn equalcup_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Equalcup));
    let degrees: Vec<usize> = (1..=cfg.pool.max_degree.min(2)).collect();
    let top = degrees.last().copied().unwrap_or(1) + 1;
    let runs = par(cfg, SuiteName::Equalcup, n, |k, rng| {
        let g = [groups[k % groups.len()].clone()];
        let d = random_selmer(&g, &cfg.pool.moduli, cfg.pool.max_locals, rng)?;
        let cx = d.complexes(top, cap)?;
        let mut samples = Vec::new();
        for f in Flavor::ALL {
            for &i in &degrees {
                samples.extend(d.equalcup_samples(&cx, f, i, 2, rng).into_iter().map(|s| (f, i, s.allowed)));
            }
        }
        let mut st = Structural::default();
        for f in Flavor::ALL {
            st.record(&format!("long exact sequence ({})", f.name()), cx.flavor(f).long_exact(0, top as i32 - 2).map(|_| ()));
        }
        st.record("d² = 0 on C_f", cx.selmer.y.check_d2());
        let q = d.cone_rewriting(&cx)?;
        st.record("cone rewriting of C_f", if q.quasi_isomorphism { Ok(()) } else { Err(Error::InvalidInput(format!("{q:?}"))) });
        compact_leibniz(&d, cap, rng, &mut st)?;
        Ok((d, samples, st))
    })?;
    let mut t = Tallies::default();
    let mut st = Structural::default();
    for (k, (_, samples, s)) in runs.iter().enumerate() {
        for &(f, i, set) in samples {
            t.record(&format!("{}-degree-{i}", f.name()), Sign::Plus, k, set);
        }
        st.merge(s.clone());
    }
    let locals: usize = runs.iter().map(|r| r.0.site.locals.len()).sum();
    let details = json!({ "groups": names(&groups, n), "locals_total": locals });
    Ok(finish(SuiteName::Equalcup, n, &t, st, None, |k| selmer_dump(&runs[k].0), details))
}

fn splitting(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Splitting));
    let cases = par(cfg, SuiteName::Splitting, n, |k, rng| {
        let (g, m) = pick(&groups, &cfg.pool.moduli, k);
        let site = if k % 4 == 0 {
            // G_v = G: nonsplit extensions are obstructed
            let id: Vec<usize> = (0..g.order()).collect();
            SiteModel::untwisted(g.clone(), vec![Local { name: "v".into(), group: g.clone(), embedding: id }], m)?
        } else {
            random_site(&g, m, cfg.pool.max_locals.max(1), rng)
        };
        Ok((random_extension(&g, m, cap, rng)?, site))
    })?;
    let r = splitting_suite(&cases, &mut cfg.rng(SuiteName::Splitting, n))?;
    let mut st = Structural::default();
    st.checks = r.checks;
    let failure = r.inconsistent.first().map(|c| {
        let (e, s) = &cases[c.instance];
        (
            format!("conditions disagree at `{}`: {:?}", c.local, c.conditions),
            Some(json!({ "case": c, "extension": ExtensionDump::new(e), "site": SiteDump::new(s) })),
        )
    });
    let details = json!({
        "trivialized": r.trivialized,
        "obstructed": r.obstructed,
        "checks": r.checks,
        "jointly_false": r.failures,
        "inconsistent": r.inconsistent.len(),
    });
    Ok(finish(SuiteName::Splitting, n, &Tallies::default(), st, failure, |_| json!(null), details))
}

fn selcho(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, n) = (cfg.groups(), cfg.trials_for(SuiteName::Selcho));
    let deg = cfg.pool.max_degree.min(2);
    let runs = par(cfg, SuiteName::Selcho, n, |k, rng| {
        let g = [groups[k % groups.len()].clone()];
        let d = random_selmer(&g, &cfg.pool.moduli, cfg.pool.max_locals.max(1), rng)?;
        let sigma = rng.gen_range(0..d.site.group.order());
        let r = d.verify_selcho(sigma, deg, 2, rng)?;
        Ok((d, r))
    })?;
    let failure = runs.iter().enumerate().find(|(_, (_, r))| !r.square_commutes).map(|(k, (d, r))| {
        (format!("conjugation square fails for σ = {}", r.sigma), Some(json!({ "instance": k, "data": selmer_dump(d), "report": r })))
    });
    let mut st = Structural::default();
    st.checks = runs.iter().map(|r| r.1.cochains_checked).sum();
    let details = json!({
        "pairs": n,
        "max_degree": deg,
        "phi_changed": runs.iter().filter(|r| r.1.phi_changed).count(),
        "unchanged_phi_would_fail": runs.iter().filter(|r| !r.1.unchanged_phi_commutes).count(),
    });
    Ok(finish(SuiteName::Selcho, n, &Tallies::default(), st, failure, |_| json!(null), details))
}

/// The fixed instances that make a suite nondegenerate, if the bounds allow them.
fn fixed_allowed(cfg: &RunConfig, order: usize) -> bool {
    order <= cfg.pool.max_group_order
}

fn adjunction(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Adjunction));
    let pairs = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    let big = fixed_allowed(cfg, 27);
    let mut omitted = Vec::new();
    if !big {
        omitted.push("augmentation of (Z/3)^3: group order 27 exceeds pool.max_group_order");
    }
    let runs = par(cfg, SuiteName::Adjunction, n, |k, rng| {
        let d = match k {
            0 if big => elementary_augmentation(3, 3, false)?,
            1 if fixed_allowed(cfg, 9) => elementary_augmentation(3, 2, true)?,
            2 if fixed_allowed(cfg, 6) => {
                let site = z2_in_s3(3);
                crate::site::instances::random_selmer_on(&site, rng)?
            }
            _ => random_selmer(&[groups[k % groups.len()].clone()], &cfg.pool.moduli, cfg.pool.max_locals, rng)?,
        };
        let mut samples = Vec::new();
        let mut st = Structural::default();
        for &(i, j) in &pairs {
            samples.extend(d.adjunction_samples(i, j, 2, rng, cap)?.into_iter().map(|s| (i, j, s.allowed)));
            let ok = d.adjunction_coboundary_check(i, j, rng, cap)?;
            st.record("coboundary inputs give trivial classes", if ok { Ok(()) } else { Err(Error::InvalidInput(format!("({i}, {j})"))) });
        }
        Ok((d, samples, st))
    })?;
    let mut literal = Tallies::default();
    let mut graded = Tallies::default();
    let mut st = Structural::default();
    for (k, (_, samples, s)) in runs.iter().enumerate() {
        for &(i, j, set) in samples {
            let g = if (i + j) % 2 == 1 { SignSet { plus: set.minus, minus: set.plus } } else { set };
            literal.record("literal", Sign::Plus, k, set);
            literal.record(&format!("literal-{i}{j}"), Sign::Plus, k, set);
            graded.record("graded", Sign::Plus, k, g);
            graded.record(&format!("graded-{i}{j}"), Sign::Plus, k, g);
        }
        st.merge(s.clone());
    }
    let per_pair: BTreeMap<String, Vec<i64>> = literal
        .records()
        .into_iter()
        .filter(|(k, _)| k != "literal")
        .map(|(k, r)| (k.trim_start_matches("literal-").to_string(), r.allowed))
        .collect();
    let details = json!({
        "identity": "g _c∪ (χ ∪ f) = ε (−1)^i (χ* ∪_c g) _c∪ f",
        "per_pair_allowed": per_pair,
        "graded_identity": "g _c∪ (χ ∪ f) = ε (−1)^j (χ* ∪_c g) _c∪ f",
        "graded": SignRecord::new(&graded.map["graded"].0, Sign::Plus),
        "omitted_fixed_instances": omitted,
    });
    let mut all = Tallies::default();
    all.map.extend(literal.map);
    all.map.extend(graded.map.into_iter().filter(|(k, _)| k != "graded"));
    // the graded form is recorded as detail only: the failing key is the literal one
    let rep = finish(SuiteName::Adjunction, n, &all, st, None, |k| selmer_dump(&runs[k].0), details);
    Ok(rep)
}

fn triangle(cfg: &RunConfig) -> Result<SuiteReport> {
    let (groups, cap, n) = (cfg.groups(), cfg.bounds.max_cells, cfg.trials_for(SuiteName::Triangle));
    let top = cfg.pool.max_degree + 1;
    let runs = par(cfg, SuiteName::Triangle, n, |k, rng| {
        let (g, m) = pick(&groups, &cfg.pool.moduli, k);
        let e = random_extension(&g, m, cap, rng)?;
        // ι′ = 0 makes O = C (the N′ = 0 case up to a zero summand)
        let scalar = if k % 5 == 0 { 0 } else { rng.gen_range(0..m) };
        let (a2, iota2) = if k % 3 == 0 {
            let b = e.b.clone();
            (b, e.iota.scale(scalar))
        } else {
            (e.a.clone(), ModuleHom::scalar(&e.a.module, scalar))
        };
        let t = Triangle::pushout(&e.a, &e.b, &e.iota, &a2, &iota2, top, cap)?;
        let valid = t.quasi_iso_check()?;
        let invalid = (!iota2.is_zero()).then(|| t.with_doubled_pi2().quasi_iso_check().is_err());
        Ok((e, valid, invalid))
    })?;
    let failure = runs.iter().enumerate().find_map(|(k, (e, v, inv))| {
        if !v.quasi_isomorphism {
            Some((format!("(−π, ι′) is not a quasi-isomorphism on instance {k}"), Some(json!({ "extension": ExtensionDump::new(e), "report": v }))))
        } else if *inv == Some(false) {
            Some((format!("perturbed triangle accepted on instance {k}"), Some(json!({ "extension": ExtensionDump::new(e) }))))
        } else {
            None
        }
    });
    let mut st = Structural::default();
    st.checks = runs.len();
    let details = json!({
        "valid": runs.len(),
        "invalid_tested": runs.iter().filter(|r| r.2.is_some()).count(),
        "invalid_rejected": runs.iter().filter(|r| r.2 == Some(true)).count(),
        "degrees": (0..top).collect::<Vec<_>>(),
    });
    Ok(finish(SuiteName::Triangle, n, &Tallies::default(), st, failure, |_| json!(null), details))
}

fn reciprocity(cfg: &RunConfig) -> Result<SuiteReport> {
    let (cap, n) = (cfg.bounds.max_cells, cfg.trials_for(SuiteName::Reciprocity));
    let big = fixed_allowed(cfg, 27);
    let runs = par(cfg, SuiteName::Reciprocity, n, |k, rng| {
        let inst = match k {
            0 if big => elementary_reciprocity(3, false)?,
            1 if big => elementary_reciprocity(3, true)?,
            _ => random_reciprocity([3, 5][k % 2], 1 + (k as u32 / 2) % 2, rng)?,
        };
        let cells = if k < 2 && big { cap.max(1 << 26) } else { cap };
        let r = reciprocity_suite(&inst, cells)?;
        Ok((inst, r))
    })?;
    let mut t = Tallies::default();
    for (k, (_, r)) in runs.iter().enumerate() {
        t.record("outer-square", Sign::Minus, k, r.outer_square);
    }
    let failure = runs.iter().enumerate().find(|(_, (_, r))| !r.antisymmetric).map(|(k, (inst, r))| {
        (
            format!("symmetrized class is not a coboundary on instance {k}"),
            Some(json!({ "site": SiteDump::new(&inst.site), "x": inst.x.invariants(), "mu": inst.mu, "q": inst.q.matrix.to_rows(), "report": r })),
        )
    });
    let mut st = Structural::default();
    st.checks = runs.len();
    let summary: Vec<_> = runs
        .iter()
        .map(|(_, r)| {
            json!({
                "group": r.group, "modulus": r.modulus, "x": r.x, "y": r.y, "h1": r.h1,
                "outer_square": SignRecord::new(&{ let mut t = SignTally::default(); t.record(0, r.outer_square); t }, Sign::Minus).allowed,
                "antisymmetry_nontrivial": r.antisymmetry_nontrivial, "rho_kernel": r.rho_kernel,
            })
        })
        .collect();
    let details = json!({
        "instances": summary,
        "nondegenerate_instances": runs.iter().filter(|r| !r.1.outer_square.is_all()).count(),
        "c1": runs.first().map(|r| json!(r.1.theta2)),
        "c2": runs.first().map(|r| json!(r.1.triangle)),
        "big_instances_included": big,
    });
    let dump = |k: usize| {
        let inst = &runs[k].0;
        json!({ "site": SiteDump::new(&inst.site), "x": inst.x.invariants(), "mu": inst.mu, "q": inst.q.matrix.to_rows() })
    };
    Ok(finish(SuiteName::Reciprocity, n, &t, st, failure, dump, details))
}

fn reference(cfg: &RunConfig) -> Result<SuiteReport> {
    let cap = cfg.bounds.max_cells;
    let mut st = Structural::default();
    let mut failures = Vec::new();
    let mut check = |what: &str, ok: bool, got: serde_json::Value| {
        st.checks += 1;
        if !ok {
            failures.push(json!({ "check": what, "got": got }));
        }
    };
    let g = Arc::new(FiniteGroup::cyclic(3));
    let z3 = GModule::trivial(g.clone(), FinAbModule::cyclic(3));
    let cx = cochain_complex(&z3, 3, cap)?;
    let h: Vec<Vec<i64>> = (0..3).map(|i| cx.cohomology(i).map(|c| c.module().invariants().to_vec())).collect::<Result<_>>()?;
    check("H^i(Z/3, Z/3) = Z/3, i = 0, 1, 2", h.iter().all(|v| v == &vec![3]), json!(h));
    let site = two_point_z3();
    let c = site.compact_complex(&z3, 4, cap)?;
    c.long_exact()?;
    let dims: Vec<usize> = (0..4).map(|i| c.invariants(i).map(|v| v.len())).collect::<Result<_>>()?;
    check("two-point Z/3 site: H^i_c dims", dims == vec![0, 1, 1, 1], json!(dims));
    let id = pointwise_map(&ModuleHom::identity(&z3.module), 3, 3);
    let co = cone(&id, &cx, &cx, "Cone(id)")?;
    let acyclic: Vec<Vec<i64>> = (0..3).map(|i| co.cohomology(i).map(|c| c.module().invariants().to_vec())).collect::<Result<_>>()?;
    check("cone of the identity is acyclic", acyclic.iter().all(|v| v.is_empty()), json!(acyclic));
    let tw = twist_identification(&site, &FinAbModule::cyclic(3), cap)?;
    check("H_c(R(1)) ⊗ T ≅ H_c(T(1)) for T = Z/3", tw.maps.iter().all(|m| m.status == TwistStatus::Iso), json!(tw));
    let failure = failures.first().map(|f| ("reference value mismatch".to_string(), Some(f.clone())));
    let details = json!({ "h_z3": h, "compact_dims": dims, "failures": failures.len() });
    Ok(finish(SuiteName::Reference, 1, &Tallies::default(), st, failure, |_| json!(null), details))
}

fn cyclo(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut st = Structural::default();
    let mut failures: Vec<serde_json::Value> = Vec::new();
    let mut check = |what: &str, ok: bool, got: serde_json::Value| {
        st.checks += 1;
        if !ok {
            failures.push(json!({ "check": what, "got": got }));
        }
    };
    let irr: BTreeMap<i64, Vec<i64>> = [7, 37, 157].into_iter().map(|p| Ok((p, irregular_indices(p)?))).collect::<Result<_>>()?;
    check("irregular indices", irr[&7].is_empty() && irr[&37] == vec![32] && irr[&157] == vec![62, 110], json!(irr));
    let mut disagreements = Vec::new();
    for p in (5..200).filter(|&p| is_prime(p)) {
        for k in (0..=p - 3).step_by(2) {
            if bernoulli_mod(p, k)? != bernoulli_mod_power_sums(p, k)? {
                disagreements.push((p, k));
            }
        }
    }
    check("Bernoulli recurrence = power sums, p < 200", disagreements.is_empty(), json!(disagreements));
    let ctx = CycloContext::new(5, 2)?;
    let w2 = ctx.teichmuller(2)?;
    check("ω(2) = 7 mod 25", w2 == 7, json!(w2));
    let modules = cfg.trials_for(SuiteName::Cyclo).max(20);
    let bad: Vec<usize> = par(cfg, SuiteName::Cyclo, modules, |k, rng| {
        let m = random_delta_module(&ctx, 1 + k % 3, rng)?;
        Ok((k, eigenspace_idempotents(&ctx, &m)?.verified()))
    })?
    .into_iter()
    .filter(|(_, ok)| !ok)
    .map(|(k, _)| k)
    .collect();
    check("idempotent completeness, orthogonality, idempotence", bad.is_empty(), json!(bad));
    let eta = eta_exponents(&CycloContext::new(5, 1)?, 3, 1)?;
    check("η_3 exponents for p = 5", eta == vec![1, 4, 4, 1], json!(eta));
    let csv = synthetic_table_csv(100, &mut cfg.rng(SuiteName::Cyclo, modules));
    let table = PairingTable::from_csv(csv.as_bytes())?;
    let (r1, r2) = (validate_pairing_table(&table), validate_pairing_table(&table));
    check("synthetic (x, −x) table passes", r1.all_pass && r1.rows == 100, json!(r1.passed));
    check("table report is reproducible", r1.hash == r2.hash, json!([r1.hash, r2.hash]));
    let neg = PairingTable::from_csv("p,k,kprime,val_kprime,val_k,yk_zero,ykprime_zero\n37,2,32,0,5,1,1\n".as_bytes())?;
    let rn = validate_pairing_table(&neg);
    check("(0, 5) row flagged twice", rn.antisymmetry_violations == vec![2] && rn.iff_violations == vec![2], json!(rn.verdicts));
    let failure = failures.first().map(|f| ("cyclo check failed".to_string(), Some(f.clone())));
    let details = json!({ "irregular": irr, "random_modules": modules, "table_hash": r1.hash });
    Ok(finish(SuiteName::Cyclo, modules, &Tallies::default(), st, failure, |_| json!(null), details))
}
