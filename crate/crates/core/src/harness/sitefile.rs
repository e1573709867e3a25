//! Site description files: a finite site with explicit integer data, and the
//! site-level suites to run on it.

use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use super::dump::SiteDump;
use super::{Bounds, Outcome, SignRecord};
use crate::error::{Error, Result};
use crate::groupcoh::{FiniteGroup, GModule};
use crate::modlin::{cokernel, kernel, FinAbModule, Mat, ModuleHom};
use crate::pools::named_group;
use crate::sign::{Sign, SignTally};
use crate::site::selmer::{selmer_trivialize, Trivialization};
use crate::site::{reciprocity_suite, twist_identification, Flavor, Local, ReciprocityInstance, SelmerData, SiteModel};
use crate::extensions::SplitExtension;
use crate::pools::random_module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteSuite {
    /// `H^i_c` and `H^i` of `R(1)` and the long exact sequence
    Cohomology,
    /// the three natural maps `H_c(R(1)) ⊗ T → H_c(T(1))`, `T = Z/N`
    Twist,
    /// κ = χ̃ on random Selmer instances over this site
    Equalcup,
    /// the pairing adjunction on random Selmer instances over this site
    Adjunction,
    /// the reciprocity checks; needs a `[reciprocity]` section
    Reciprocity,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// a pool name such as `Z3` or `S3`
    pub name: Option<String>,
    /// a Cayley table on `0..n`
    pub table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSpec {
    pub name: String,
    /// the image of `G_v` in `G` as an element list, or ...
    pub elements: Option<Vec<usize>>,
    /// ... an explicit table of `G_v` with `embedding[h] = j_v(h)`
    pub table: Option<Vec<Vec<usize>>>,
    pub embedding: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReciprocitySpec {
    /// invariants of `X`
    pub x: Vec<i64>,
    /// `μ(g)` for every element `g`
    pub mu: Vec<Vec<i64>>,
    /// invariants of `Y`
    pub y: Vec<i64>,
    /// `q: X → Y`, one row per coordinate of `Y`
    pub q: Vec<Vec<i64>>,
}

/// Identifications `H^2_c(R(1)) ≅ X` and `H^3_c(Y(1)) ≅ Y`, as matrices in
/// the generators of the computed groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualitySpec {
    pub h2c_to_x: Vec<Vec<i64>>,
    pub h3c_to_y: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    pub compact_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteFile {
    pub modulus: i64,
    pub group: GroupSpec,
    /// `κ(g)` for every element, defining `R(1)`
    pub twist: Vec<i64>,
    #[serde(default)]
    pub locals: Vec<LocalSpec>,
    pub suites: Vec<SiteSuite>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub bounds: Bounds,
    pub reciprocity: Option<ReciprocitySpec>,
    pub duality: Option<DualitySpec>,
    pub expect: Option<ExpectSpec>,
}

fn default_trials() -> usize {
    5
}

fn err(path: impl Into<String>, e: impl ToString) -> Error {
    Error::Config { path: path.into(), msg: e.to_string() }
}

fn local_from_elements(name: &str, g: &FiniteGroup, elements: &[usize]) -> std::result::Result<Local, String> {
    if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
        return Err(format!("element {x} is not in a group of order {}", g.order()));
    }
    let mut table = Vec::with_capacity(elements.len());
    for &a in elements {
        let row = elements
            .iter()
            .map(|&b| {
                let c = g.mul(a, b);
                elements.iter().position(|&x| x == c).ok_or_else(|| format!("not closed: {a}·{b} = {c} is missing"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        table.push(row);
    }
    let h = FiniteGroup::from_table(name, table).map_err(|e| e.to_string())?;
    Local::new(name, Arc::new(h), elements.to_vec(), g).map_err(|e| e.to_string())
}

impl SiteFile {
    /// Parses TOML; errors carry the offending field path.
    pub fn parse(text: &str) -> Result<Self> {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            err(path, e.into_inner().message().trim())
        })
    }

    pub fn group(&self) -> Result<Arc<FiniteGroup>> {
        let g = match (&self.group.name, &self.group.table) {
            (Some(n), None) => named_group(n).map_err(|e| err("group.name", e))?,
            (None, Some(t)) => FiniteGroup::from_table("G", t.clone()).map_err(|e| err("group.table", e))?,
            _ => return Err(err("group", "give exactly one of `name` and `table`")),
        };
        Ok(Arc::new(g))
    }

    pub fn site(&self) -> Result<SiteModel> {
        let g = self.group()?;
        let mut locals = Vec::new();
        for (k, l) in self.locals.iter().enumerate() {
            let at = |f: &str| format!("locals[{k}].{f}");
            let local = match (&l.elements, &l.table, &l.embedding) {
                (Some(els), None, None) => local_from_elements(&l.name, &g, els).map_err(|e| err(at("elements"), e))?,
                (None, Some(t), Some(emb)) => {
                    let h = FiniteGroup::from_table(l.name.clone(), t.clone()).map_err(|e| err(at("table"), e))?;
                    if emb.len() != h.order() {
                        return Err(err(at("embedding"), format!("{} images for a group of order {}", emb.len(), h.order())));
                    }
                    if let Some(&x) = emb.iter().find(|&&x| x >= g.order()) {
                        return Err(err(at("embedding"), format!("image {x} is not in a group of order {}", g.order())));
                    }
                    Local::new(l.name.clone(), Arc::new(h), emb.clone(), &g).map_err(|e| err(at("embedding"), e))?
                }
                _ => return Err(err(format!("locals[{k}]"), "give either `elements`, or `table` with `embedding`")),
            };
            locals.push(local);
        }
        if self.twist.len() != g.order() {
            return Err(err("twist", format!("{} values for a group of order {}", self.twist.len(), g.order())));
        }
        SiteModel::new(g, locals, self.modulus, self.twist.clone()).map_err(|e| {
            let path = if e.to_string().contains("twist") { "twist" } else { "modulus" };
            err(path, e)
        })
    }

    fn reciprocity_instance(&self, site: &SiteModel) -> Result<ReciprocityInstance> {
        let r = self.reciprocity.as_ref().ok_or_else(|| err("reciprocity", "the reciprocity suite needs a `[reciprocity]` section"))?;
        let x = FinAbModule::new(r.x.clone()).map_err(|e| err("reciprocity.x", e))?;
        let y = FinAbModule::new(r.y.clone()).map_err(|e| err("reciprocity.y", e))?;
        if r.mu.len() != site.group.order() || r.mu.iter().any(|v| v.len() != x.rank()) {
            return Err(err("reciprocity.mu", format!("need {} vectors of length {}", site.group.order(), x.rank())));
        }
        let q = matrix(&r.q, y.rank(), x.rank()).map_err(|e| err("reciprocity.q", e))?;
        let q = ModuleHom::new(x.clone(), y, q).map_err(|e| err("reciprocity.q", e))?;
        let inst = ReciprocityInstance { site: site.clone(), x, mu: r.mu.clone(), q };
        inst.validate().map_err(|e| err("reciprocity", e))?;
        Ok(inst)
    }
}

fn matrix(rows: &[Vec<i64>], r: usize, c: usize) -> std::result::Result<Mat, String> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(format!("expected a {r}×{c} matrix"));
    }
    Ok(if r == 0 { Mat::zeros(0, c) } else { Mat::from_rows(rows) })
}

fn is_iso(h: &ModuleHom) -> bool {
    kernel(h).0.is_zero() && cokernel(h).0.is_zero()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteSuiteReport {
    pub suite: SiteSuite,
    pub outcome: Outcome,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiteReportBody {
    pub version: String,
    pub site: SiteDump,
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SiteSuiteReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteReport {
    pub body: SiteReportBody,
    pub hash: String,
}

impl SiteReport {
    pub fn passed(&self) -> bool {
        self.body.passed
    }

    pub fn suite(&self, s: SiteSuite) -> Option<&SiteSuiteReport> {
        self.body.suites.iter().find(|r| r.suite == s)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_site_file(path: &Path) -> Result<SiteReport> {
    let text = std::fs::read_to_string(path).map_err(|e| err(path.display().to_string(), e))?;
    run_site_text(&text)
}

pub fn run_site_text(text: &str) -> Result<SiteReport> {
    let file = SiteFile::parse(text)?;
    if file.trials == 0 {
        return Err(err("trials", "must be positive"));
    }
    let site = file.site()?;
    // the duality data is checked up front: it must be an isomorphism
    let reports = file.suites.iter().map(|&s| run_one(&file, &site, s)).collect::<Result<Vec<_>>>()?;
    let body = SiteReportBody {
        version: env!("CARGO_PKG_VERSION").into(),
        site: SiteDump::new(&site),
        seed: file.seed,
        trials: file.trials,
        passed: reports.iter().all(|r| !r.outcome.failed()),
        suites: reports,
    };
    let hash = hex::encode(Sha256::digest(serde_json::to_vec(&body).expect("report serializes")));
    Ok(SiteReport { body, hash })
}

fn rng(file: &SiteFile, k: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(file.seed);
    r.set_stream(k as u64);
    r
}

/// Random Selmer data over a fixed site; `None` if every draw was obstructed.
fn selmer_on(site: &SiteModel, rng: &mut ChaCha8Rng, cap: usize) -> Result<Option<SelmerData>> {
    for _ in 0..200 {
        let a = random_module(&site.group, site.modulus, rng);
        let c = random_module(&site.group, site.modulus, rng);
        let e = SplitExtension::random(&a, &c, rng, cap)?;
        if let Trivialization::Trivialized(d) = selmer_trivialize(&e, site)? {
            return Ok(Some(*d));
        }
    }
    Ok(None)
}

fn sign_outcome(records: &[(&str, SignRecord)]) -> Outcome {
    match records.iter().find(|(_, r)| !r.ok()) {
        Some((k, r)) => Outcome::Fail { reason: format!("sign `{k}`: {} (allowed {:?})", r.verdict, r.allowed), counterexample: None },
        None if records.iter().all(|(_, r)| r.verdict == "degenerate-pass") => Outcome::DegeneratePass,
        None => Outcome::Pass,
    }
}

fn run_one(file: &SiteFile, site: &SiteModel, s: SiteSuite) -> Result<SiteSuiteReport> {
    let cap = file.bounds.max_cells;
    let (outcome, details) = match s {
        SiteSuite::Cohomology => {
            let r1 = site.r1();
            let cc = site.compact_complex(&r1, 4, cap)?;
            let les = cc.long_exact();
            let hc: Vec<Vec<i64>> = (0..4).map(|i| cc.invariants(i)).collect::<Result<_>>()?;
            let h: Vec<Vec<i64>> = (0..4).map(|i| cc.global.cohomology(i as i32).map(|c| c.module().invariants().to_vec())).collect::<Result<_>>()?;
            let dims: Vec<usize> = hc.iter().map(|v| v.len()).collect();
            let outcome = match (&les, file.expect.as_ref().and_then(|e| e.compact_dims.as_ref())) {
                (Err(e), _) => Outcome::Fail { reason: format!("long exact sequence: {e}"), counterexample: None },
                (_, Some(want)) if want != &dims => Outcome::Fail { reason: format!("H_c dims {dims:?}, expected {want:?}"), counterexample: None },
                _ => Outcome::Pass,
            };
            (outcome, json!({ "compact_dims": dims, "compact": hc, "global": h }))
        }
        SiteSuite::Twist => {
            let t = FinAbModule::cyclic(site.modulus);
            let r = twist_identification(site, &t, cap)?;
            (Outcome::Pass, json!(r))
        }
        SiteSuite::Equalcup | SiteSuite::Adjunction => {
            let mut tallies: Vec<(String, SignTally)> = Vec::new();
            let mut rec = |key: String, k: usize, set| match tallies.iter_mut().find(|(n, _)| *n == key) {
                Some((_, t)) => t.record(k, set),
                None => {
                    let mut t = SignTally::default();
                    t.record(k, set);
                    tallies.push((key, t));
                }
            };
            let mut obstructed = 0;
            for k in 0..file.trials {
                let mut r = rng(file, k);
                let Some(d) = selmer_on(site, &mut r, cap)? else {
                    obstructed += 1;
                    continue;
                };
                if s == SiteSuite::Equalcup {
                    let cx = d.complexes(3, cap)?;
                    for f in Flavor::ALL {
                        for i in 1..=2 {
                            for smp in d.equalcup_samples(&cx, f, i, 2, &mut r) {
                                rec(format!("{}-degree-{i}", f.name()), k, smp.allowed);
                            }
                        }
                    }
                } else {
                    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                        for smp in d.adjunction_samples(i, j, 2, &mut r, cap)? {
                            rec(format!("literal-{i}{j}"), k, smp.allowed);
                        }
                    }
                }
            }
            let records: Vec<(&str, SignRecord)> = tallies.iter().map(|(k, t)| (k.as_str(), SignRecord::new(t, Sign::Plus))).collect();
            let outcome = if records.is_empty() {
                Outcome::Skipped { reason: "every random extension was locally obstructed".into() }
            } else {
                sign_outcome(&records)
            };
            let signs: serde_json::Map<String, serde_json::Value> = records.iter().map(|(k, r)| (k.to_string(), json!(r))).collect();
            (outcome, json!({ "signs": signs, "obstructed_draws": obstructed }))
        }
        SiteSuite::Reciprocity => {
            let inst = file.reciprocity_instance(site)?;
            let r = reciprocity_suite(&inst, cap)?;
            let conditional = match &file.duality {
                None => json!({ "c1": "skipped: no duality data", "c2": "skipped: no duality data" }),
                Some(d) => {
                    let h2 = site.compact_complex(&site.r1(), 3, cap)?.invariants(2)?;
                    let y1 = site.twist_module(&GModule::trivial(site.group.clone(), inst.y().clone()))?;
                    let h3 = site.compact_complex(&y1, 4, cap)?.invariants(3)?;
                    let a = FinAbModule::new(h2).and_then(|s| {
                        let m = matrix(&d.h2c_to_x, inst.x.rank(), s.rank()).map_err(Error::InvalidInput)?;
                        ModuleHom::new(s, inst.x.clone(), m)
                    });
                    let b = FinAbModule::new(h3).and_then(|s| {
                        let m = matrix(&d.h3c_to_y, inst.y().rank(), s.rank()).map_err(Error::InvalidInput)?;
                        ModuleHom::new(s, inst.y().clone(), m)
                    });
                    let a = a.map_err(|e| err("duality.h2c_to_x", e))?;
                    let b = b.map_err(|e| err("duality.h3c_to_y", e))?;
                    if !is_iso(&a) {
                        return Err(err("duality.h2c_to_x", "not an isomorphism"));
                    }
                    if !is_iso(&b) {
                        return Err(err("duality.h3c_to_y", "not an isomorphism"));
                    }
                    let why = "skipped: duality data accepted, but the comparison maps it would feed are not modeled";
                    json!({ "c1": why, "c2": why })
                }
            };
            let mut t = SignTally::default();
            t.record(0, r.outer_square);
            let sign = SignRecord::new(&t, Sign::Minus);
            let outcome = if !r.antisymmetric {
                Outcome::Fail { reason: "symmetrized class is not a coboundary".into(), counterexample: None }
            } else {
                sign_outcome(&[("outer-square", sign.clone())])
            };
            (outcome, json!({ "report": r, "outer_square": sign, "conditional": conditional }))
        }
    };
    Ok(SiteSuiteReport { suite: s, outcome, details })
}
