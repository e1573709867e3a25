//! Randomized verification runs: configuration, suite orchestration and
//! deterministic JSON reports.

mod dump;
mod sitefile;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use dump::{ExtensionDump, GroupDump, ModuleDump, SiteDump};
pub use sitefile::{run_site_file, run_site_text, SiteFile, SiteReport, SiteSuite, SiteSuiteReport};

use crate::error::{Error, Result};
use crate::groupcoh::{FiniteGroup, DEFAULT_MAX_CELLS};
use crate::pools::{named_group, DEFAULT_GROUPS, DEFAULT_MODULI};
use crate::sign::{Sign, SignTally, SignVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    /// connecting map = cup with the extension cocycle
    Cup,
    /// the dual extension, expected sign −1
    Dual,
    /// κ = χ̃ in the plain, compact and Selmer flavors
    Equalcup,
    /// the three local splitting conditions agree
    Splitting,
    /// the conjugation square
    Selcho,
    /// the pairing adjunction
    Adjunction,
    /// cone comparison for exact triangles
    Triangle,
    /// the reciprocity outer square and antisymmetry
    Reciprocity,
    /// fixed reference computations
    Reference,
    /// the cyclotomic toolkit
    Cyclo,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        SuiteName::Cup,
        SuiteName::Dual,
        SuiteName::Equalcup,
        SuiteName::Splitting,
        SuiteName::Selcho,
        SuiteName::Adjunction,
        SuiteName::Triangle,
        SuiteName::Reciprocity,
        SuiteName::Reference,
        SuiteName::Cyclo,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Cup => "cup",
            SuiteName::Dual => "dual",
            SuiteName::Equalcup => "equalcup",
            SuiteName::Splitting => "splitting",
            SuiteName::Selcho => "selcho",
            SuiteName::Adjunction => "adjunction",
            SuiteName::Triangle => "triangle",
            SuiteName::Reciprocity => "reciprocity",
            SuiteName::Reference => "reference",
            SuiteName::Cyclo => "cyclo",
        }
    }

    pub fn parse(s: &str) -> Result<SuiteName> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Config { path: "suites".into(), msg: format!("unknown suite `{s}`") })
    }

    fn stream(&self) -> u64 {
        SuiteName::ALL.iter().position(|n| n == self).expect("listed") as u64
    }
}

fn default_trials() -> usize {
    20
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolConfig {
    #[serde(default = "default_groups")]
    pub groups: Vec<String>,
    #[serde(default = "default_moduli")]
    pub moduli: Vec<i64>,
    /// highest cohomological degree sampled
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default = "default_max_group_order")]
    pub max_group_order: usize,
    #[serde(default = "default_max_locals")]
    pub max_locals: usize,
}

fn default_groups() -> Vec<String> {
    DEFAULT_GROUPS.iter().map(|s| s.to_string()).collect()
}
fn default_moduli() -> Vec<i64> {
    DEFAULT_MODULI.to_vec()
}
fn default_max_degree() -> usize {
    2
}
fn default_max_group_order() -> usize {
    24
}
fn default_max_locals() -> usize {
    2
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            groups: default_groups(),
            moduli: default_moduli(),
            max_degree: default_max_degree(),
            max_group_order: default_max_group_order(),
            max_locals: default_max_locals(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// dense entries allowed per cochain piece
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
    /// worker threads; 0 uses every core
    #[serde(default)]
    pub workers: usize,
}

fn default_max_cells() -> usize {
    DEFAULT_MAX_CELLS
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_cells: default_max_cells(), workers: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub suites: Vec<SuiteName>,
    /// instances per suite
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// per-suite overrides of `trials`
    #[serde(default)]
    pub suite_trials: BTreeMap<SuiteName, usize>,
    #[serde(default)]
    pub pool: PoolConfig,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default, skip_serializing)]
    pub output: OutputConfig,
}

fn config_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Config { path: path.into(), msg: msg.into() }
}

impl RunConfig {
    pub fn new(seed: u64, suites: Vec<SuiteName>, trials: usize) -> Self {
        RunConfig {
            seed,
            suites,
            trials,
            suite_trials: BTreeMap::new(),
            pool: PoolConfig::default(),
            bounds: Bounds::default(),
            output: OutputConfig::default(),
        }
    }

    /// Parses TOML; errors carry the offending field path.
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::new(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let msg = e.into_inner().message().trim().to_string();
            config_err(&path, msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(config_err("suites", "no suite selected"));
        }
        if self.trials == 0 {
            return Err(config_err("trials", "must be positive"));
        }
        if let Some((s, _)) = self.suite_trials.iter().find(|(_, &t)| t == 0) {
            return Err(config_err(&format!("suite_trials.{}", s.as_str()), "must be positive"));
        }
        let p = &self.pool;
        if p.groups.is_empty() {
            return Err(config_err("pool.groups", "empty group pool"));
        }
        for (k, g) in p.groups.iter().enumerate() {
            named_group(g).map_err(|e| config_err(&format!("pool.groups[{k}]"), e.to_string()))?;
        }
        if p.moduli.is_empty() {
            return Err(config_err("pool.moduli", "empty modulus pool"));
        }
        if let Some(k) = p.moduli.iter().position(|&n| !(2..=1 << 20).contains(&n)) {
            return Err(config_err(&format!("pool.moduli[{k}]"), format!("modulus {} outside 2..=2^20", p.moduli[k])));
        }
        if !(1..=3).contains(&p.max_degree) {
            return Err(config_err("pool.max_degree", "must be 1, 2 or 3"));
        }
        if p.max_group_order == 0 {
            return Err(config_err("pool.max_group_order", "must be positive"));
        }
        if self.groups().is_empty() {
            return Err(config_err("pool.max_group_order", "excludes every group in the pool"));
        }
        if self.bounds.max_cells == 0 {
            return Err(config_err("bounds.max_cells", "must be positive"));
        }
        Ok(())
    }

    pub fn trials_for(&self, s: SuiteName) -> usize {
        self.suite_trials.get(&s).copied().unwrap_or(self.trials)
    }

    /// The group pool after the order bound.
    pub fn groups(&self) -> Vec<Arc<FiniteGroup>> {
        self.pool
            .groups
            .iter()
            .filter_map(|g| named_group(g).ok())
            .filter(|g| g.order() <= self.pool.max_group_order)
            .map(Arc::new)
            .collect()
    }

    /// Independent stream for instance `k` of suite `s`.
    pub fn rng(&self, s: SuiteName, k: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream((s.stream() << 32) | k as u64);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    DegeneratePass,
    Fail {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        counterexample: Option<serde_json::Value>,
    },
    Skipped {
        reason: String,
    },
}

impl Outcome {
    pub fn failed(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::DegeneratePass => "degenerate-pass",
            Outcome::Fail { .. } => "fail",
            Outcome::Skipped { .. } => "skipped",
        }
    }
}

/// A global sign determined across instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignRecord {
    pub expected: i64,
    /// signs consistent with every instance
    pub allowed: Vec<i64>,
    pub verdict: String,
    pub samples: usize,
    pub determining_samples: usize,
}

impl SignRecord {
    pub fn new(t: &SignTally, expected: Sign) -> Self {
        let mut allowed = Vec::new();
        if t.allowed.plus {
            allowed.push(1);
        }
        if t.allowed.minus {
            allowed.push(-1);
        }
        let verdict = match t.verdict(expected) {
            SignVerdict::Pass { .. } => "pass",
            SignVerdict::DegeneratePass => "degenerate-pass",
            SignVerdict::Mismatch { .. } => "mismatch",
            SignVerdict::Inconsistent => "inconsistent",
        };
        SignRecord {
            expected: expected.value(),
            allowed,
            verdict: verdict.into(),
            samples: t.instances,
            determining_samples: t.determining_instances,
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict == "pass" || self.verdict == "degenerate-pass"
    }
}

/// Inline structural checks: `d² = 0`, Leibniz rules, long exact sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Structural {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Structural {
    pub fn record(&mut self, what: &str, r: Result<()>) {
        self.checks += 1;
        if let Err(e) = r {
            self.failures.push(format!("{what}: {e}"));
        }
    }

    pub fn merge(&mut self, other: Structural) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub outcome: Outcome,
    pub instances: usize,
    pub signs: BTreeMap<String, SignRecord>,
    pub structural: Structural,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportBody {
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub body: ReportBody,
    /// sha256 of the body JSON
    pub hash: String,
    /// wall-clock milliseconds per suite; not part of the body
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(body: ReportBody, timing_ms: BTreeMap<String, u64>) -> Self {
        let hash = hex::encode(Sha256::digest(Self::json_of(&body).as_bytes()));
        Report { body, hash, timing_ms }
    }

    fn json_of(body: &ReportBody) -> String {
        serde_json::to_string(body).expect("report serializes")
    }

    pub fn body_json(&self) -> String {
        Self::json_of(&self.body)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn passed(&self) -> bool {
        self.body.passed
    }

    pub fn suite(&self, s: SuiteName) -> Option<&SuiteReport> {
        self.body.suites.iter().find(|r| r.suite == s)
    }
}

/// Runs every enabled suite and assembles the report; writes it when an
/// output path is configured.
pub fn run_suites(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if cfg.bounds.workers > 0 {
            b = b.num_threads(cfg.bounds.workers);
        }
        b.build().map_err(|e| config_err("bounds.workers", e.to_string()))?
    };
    let mut suites = Vec::new();
    let mut timing = BTreeMap::new();
    let mut order = cfg.suites.clone();
    order.dedup();
    for s in order {
        let t = Instant::now();
        let r = pool.install(|| suites::run(cfg, s));
        timing.insert(s.as_str().to_string(), t.elapsed().as_millis() as u64);
        suites.push(r);
    }
    let passed = suites.iter().all(|r| !r.outcome.failed());
    let body = ReportBody { version: env!("CARGO_PKG_VERSION").into(), config: cfg.clone(), suites, passed };
    let report = Report::new(body, timing);
    if let Some(path) = &cfg.output.report {
        std::fs::write(path, report.to_json_pretty()).map_err(|e| config_err("output.report", e.to_string()))?;
    }
    Ok(report)
}
