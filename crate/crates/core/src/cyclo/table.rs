use std::collections::BTreeMap;
use std::io::Read;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bernoulli_mod_power_sums;
use crate::error::{Error, Result};
use crate::modlin::zn::{is_prime, md};

pub const COLUMNS: [&str; 7] = ["p", "k", "kprime", "val_kprime", "val_k", "yk_zero", "ykprime_zero"];

/// One ingested row: `val_kprime = [η_{p−k}, η_{k+k′−1}]_{k′}`,
/// `val_k = [η_{p−k′}, η_{k+k′−1}]_k`, both reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingRow {
    pub p: i64,
    pub k: i64,
    pub kprime: i64,
    pub val_kprime: i64,
    pub val_k: i64,
    /// the `Y^{(k)} = 0` analog
    pub yk_zero: bool,
    pub ykprime_zero: bool,
}

#[derive(Deserialize)]
struct RawRow {
    p: i64,
    k: i64,
    kprime: i64,
    val_kprime: i64,
    val_k: i64,
    yk_zero: String,
    ykprime_zero: String,
}

fn parse_flag(name: &str, s: &str) -> std::result::Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(format!("{name}: expected a boolean flag, got `{s}`")),
    }
}

impl PairingRow {
    fn from_raw(r: RawRow) -> std::result::Result<Self, String> {
        let p = r.p;
        if p < 3 || !is_prime(p) {
            return Err(format!("p = {p} is not an odd prime"));
        }
        if r.k % 2 != 0 || r.kprime % 2 != 0 {
            return Err(format!("k = {}, k′ = {} must both be even", r.k, r.kprime));
        }
        if !(2 <= r.k && r.k < r.kprime && r.kprime <= p - 3) {
            return Err(format!("need 2 ≤ k < k′ ≤ {}, got k = {}, k′ = {}", p - 3, r.k, r.kprime));
        }
        Ok(PairingRow {
            p,
            k: r.k,
            kprime: r.kprime,
            val_kprime: md(r.val_kprime, p),
            val_k: md(r.val_k, p),
            yk_zero: parse_flag("yk_zero", &r.yk_zero)?,
            ykprime_zero: parse_flag("ykprime_zero", &r.ykprime_zero)?,
        })
    }
}

/// Rows keyed by their line in the source file; malformed rows are kept.
#[derive(Clone, Debug, Default)]
pub struct PairingTable {
    pub entries: Vec<(usize, std::result::Result<PairingRow, String>)>,
}

impl PairingTable {
    pub fn from_rows(rows: Vec<PairingRow>) -> Self {
        PairingTable { entries: rows.into_iter().enumerate().map(|(i, r)| (i + 2, Ok(r))).collect() }
    }

    /// Header must be exactly `p,k,kprime,val_kprime,val_k,yk_zero,ykprime_zero`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::InvalidInput(format!("line 1: {e}")))?.clone();
        if header.iter().collect::<Vec<_>>() != COLUMNS {
            return Err(Error::InvalidInput(format!(
                "line 1: header must be `{}`, got `{}`",
                COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let (line, parsed) = match rec {
                Ok(rec) => {
                    let line = rec.position().map_or(0, |p| p.line() as usize);
                    let parsed = if rec.len() != COLUMNS.len() {
                        Err(format!("expected {} fields, found {}", COLUMNS.len(), rec.len()))
                    } else {
                        rec.deserialize::<RawRow>(Some(&header)).map_err(|e| e.to_string()).and_then(PairingRow::from_raw)
                    };
                    (line, parsed)
                }
                Err(e) => (e.position().map_or(0, |p| p.line() as usize), Err(e.to_string())),
            };
            entries.push((line, parsed));
        }
        Ok(PairingTable { entries })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_csv(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowVerdict {
    Checked {
        line: usize,
        row: PairingRow,
        /// `val_kprime ≡ −val_k`
        antisymmetric: bool,
        /// both zero or both nonzero
        iff_vanishing: bool,
        /// both `Y`-vanishing flags set
        hypotheses_flagged: bool,
        /// `k` and `k′` both irregular for `p`
        indices_irregular: bool,
        pass: bool,
    },
    Malformed {
        line: usize,
        reason: String,
    },
}

impl RowVerdict {
    pub fn line(&self) -> usize {
        match self {
            RowVerdict::Checked { line, .. } | RowVerdict::Malformed { line, .. } => *line,
        }
    }
}

fn verdict(line: usize, row: &PairingRow) -> RowVerdict {
    let irregular = |k| bernoulli_mod_power_sums(row.p, k).map(|b| b == 0).unwrap_or(false);
    let antisymmetric = md(row.val_kprime + row.val_k, row.p) == 0;
    let iff_vanishing = (row.val_kprime == 0) == (row.val_k == 0);
    RowVerdict::Checked {
        line,
        row: row.clone(),
        antisymmetric,
        iff_vanishing,
        hypotheses_flagged: row.yk_zero && row.ykprime_zero,
        indices_irregular: irregular(row.k) && irregular(row.kprime),
        pass: antisymmetric && iff_vanishing,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VanishingTally {
    pub rows: usize,
    pub nonzero: usize,
    pub all_vanish: bool,
}

impl VanishingTally {
    fn record(&mut self, v: i64) {
        self.rows += 1;
        self.nonzero += usize::from(v != 0);
        self.all_vanish = self.nonzero == 0;
    }
}

/// Vanishing of `(η_{p−k}, η_{k+k′−1})` for one `(p, k)`: over `k′ > k`
/// only, and over every `k′ ≠ k` in the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBookkeeping {
    pub p: i64,
    pub k: i64,
    pub kprime_greater: VanishingTally,
    pub kprime_any: VanishingTally,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub rows: usize,
    pub checked: usize,
    pub passed: usize,
    pub antisymmetry_violations: Vec<usize>,
    pub iff_violations: Vec<usize>,
    pub malformed: Vec<usize>,
    pub all_pass: bool,
    pub bookkeeping: Vec<IndexBookkeeping>,
    pub verdicts: Vec<RowVerdict>,
    /// sha256 of the JSON of every other field
    pub hash: String,
}

pub fn validate_pairing_table(table: &PairingTable) -> TableReport {
    let verdicts: Vec<RowVerdict> = table
        .entries
        .par_iter()
        .map(|(line, r)| match r {
            Ok(row) => verdict(*line, row),
            Err(reason) => RowVerdict::Malformed { line: *line, reason: reason.clone() },
        })
        .collect();
    let mut anti = Vec::new();
    let mut iff = Vec::new();
    let mut malformed = Vec::new();
    let mut passed = 0;
    let mut book: BTreeMap<(i64, i64), (VanishingTally, VanishingTally)> = BTreeMap::new();
    for v in &verdicts {
        match v {
            RowVerdict::Checked { line, row, antisymmetric, iff_vanishing, pass, .. } => {
                if !antisymmetric {
                    anti.push(*line);
                }
                if !iff_vanishing {
                    iff.push(*line);
                }
                passed += usize::from(*pass);
                // (η_{p−k}, η_{k+k′−1}) sits in val_kprime; (η_{p−k′}, ·) in val_k
                let lo = book.entry((row.p, row.k)).or_default();
                lo.0.record(row.val_kprime);
                lo.1.record(row.val_kprime);
                book.entry((row.p, row.kprime)).or_default().1.record(row.val_k);
            }
            RowVerdict::Malformed { line, .. } => malformed.push(*line),
        }
    }
    let bookkeeping = book
        .into_iter()
        .map(|((p, k), (g, a))| IndexBookkeeping { p, k, kprime_greater: g, kprime_any: a })
        .collect();
    let checked = verdicts.len() - malformed.len();
    let mut report = TableReport {
        rows: verdicts.len(),
        checked,
        passed,
        all_pass: malformed.is_empty() && passed == checked,
        antisymmetry_violations: anti,
        iff_violations: iff,
        malformed,
        bookkeeping,
        verdicts,
        hash: String::new(),
    };
    let body = serde_json::to_vec(&report).expect("report serializes");
    report.hash = hex::encode(Sha256::digest(&body));
    report
}

/// Primes below 200 with at least one irregular index.
const IRREGULAR_PRIMES: [i64; 14] = [37, 59, 67, 101, 103, 131, 149, 157, 233, 257, 263, 271, 283, 293];

/// `rows` consistent rows `(x, −x)` with random flags, as CSV text.
pub fn synthetic_table_csv<R: Rng + ?Sized>(rows: usize, rng: &mut R) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for _ in 0..rows {
        let p = *IRREGULAR_PRIMES.choose(rng).expect("nonempty");
        let k = 2 * rng.gen_range(1..(p - 3) / 2);
        let kprime = 2 * rng.gen_range(k / 2 + 1..=(p - 3) / 2);
        let x = rng.gen_range(0..p);
        let flag = |rng: &mut R| u8::from(rng.gen_bool(0.5));
        out.push_str(&format!("{p},{k},{kprime},{x},{},{},{}\n", md(-x, p), flag(rng), flag(rng)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(line: &str) -> TableReport {
        let csv = format!("{}\n{line}\n", COLUMNS.join(","));
        validate_pairing_table(&PairingTable::from_csv(csv.as_bytes()).unwrap())
    }

    #[test]
    fn consistent_and_inconsistent_rows() {
        let r = one("37,2,32,3,-3,1,1");
        assert!(r.all_pass);
        let r = one("37,2,32,0,5,0,0");
        assert!(!r.all_pass);
        assert_eq!(r.antisymmetry_violations, vec![2]);
        assert_eq!(r.iff_violations, vec![2]);
    }

    #[test]
    fn malformed_rows_keep_line_numbers() {
        let csv = format!("{}\n37,2,32,3,34,1,1\n37,3,32,1,1,1,1\n37,2,32,x,1,1,1\n37,2\n", COLUMNS.join(","));
        let r = validate_pairing_table(&PairingTable::from_csv(csv.as_bytes()).unwrap());
        assert_eq!(r.rows, 4);
        assert_eq!(r.malformed, vec![3, 4, 5]);
        assert!(PairingTable::from_csv("p,k\n".as_bytes()).is_err());
    }
}
