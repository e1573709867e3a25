use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cupcone::cyclo::{eta_exponents, irregular_indices, synthetic_table_csv, validate_pairing_table, CycloContext, PairingTable};
use cupcone::harness::{run_site_file, run_suites, RunConfig, SuiteName};
use cupcone::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cupcone", version, about = "Sign audits for cup products and connecting maps on finite models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and print the JSON report
    Verify(VerifyArgs),
    /// Site description files
    #[command(subcommand)]
    Site(SiteCmd),
    /// Cyclotomic helpers
    #[command(subcommand)]
    Cyclo(CycloCmd),
}

#[derive(Args)]
struct VerifyArgs {
    /// suite name, or `all`; repeatable
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// instances per suite
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    max_group_order: Option<usize>,
    /// worker threads (0: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// TOML run config; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// also write the report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SiteCmd {
    /// Build the site in FILE and run its suites
    Run {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CycloCmd {
    /// Irregular indices k with p | B_k
    Irregular { p: i64 },
    /// Exponents of η_i as δ runs over 1..p−1, mod p^r
    Eta {
        p: i64,
        #[arg(allow_hyphen_values = true)]
        i: i64,
        r: u32,
    },
    /// Check a pairing table (CSV) and print the JSON report
    Validate { csv: PathBuf },
    /// Print a consistent synthetic pairing table
    Synth {
        #[arg(long, default_value_t = 100)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status 2 for bad input, 1 for a failed check.
enum Fail {
    Config(String),
    Check,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Config(e.to_string())
    }
}

fn write(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    if let Some(p) = out {
        std::fs::write(p, text).map_err(|e| Fail::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Fail> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Fail::Config(format!("{}: {e}", p.display())))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::new(0, vec![], 20),
    };
    if !a.suites.is_empty() {
        cfg.suites.clear();
        for s in &a.suites {
            if s == "all" {
                cfg.suites.extend(SuiteName::ALL);
            } else {
                cfg.suites.push(SuiteName::parse(s)?);
            }
        }
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(d) = a.max_degree {
        cfg.pool.max_degree = d;
    }
    if let Some(k) = a.max_group_order {
        cfg.pool.max_group_order = k;
    }
    if let Some(w) = a.workers {
        cfg.bounds.workers = w;
    }
    if a.out.is_some() {
        cfg.output.report = a.out.clone();
    }
    let report = run_suites(&cfg)?;
    for s in &report.body.suites {
        eprintln!("{:<12} {:<16} {} instances", s.suite.as_str(), s.outcome.label(), s.instances);
    }
    println!("{}", report.to_json_pretty());
    if report.passed() {
        Ok(())
    } else {
        Err(Fail::Check)
    }
}

fn cyclo(c: CycloCmd) -> Result<(), Fail> {
    match c {
        CycloCmd::Irregular { p } => {
            let ks = irregular_indices(p)?;
            println!("{}", json!({ "p": p, "irregular": ks }));
        }
        CycloCmd::Eta { p, i, r } => {
            let ctx = CycloContext::new(p, r)?;
            let ex = eta_exponents(&ctx, i, r)?;
            println!("{}", json!({ "p": p, "i": i, "r": r, "modulus": ctx.modulus, "exponents": ex }));
        }
        CycloCmd::Validate { csv } => {
            let t = PairingTable::from_path(&csv)?;
            let r = validate_pairing_table(&t);
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            if !r.all_pass {
                return Err(Fail::Check);
            }
        }
        CycloCmd::Synth { rows, seed } => {
            print!("{}", synthetic_table_csv(rows, &mut ChaCha8Rng::seed_from_u64(seed)));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Site(SiteCmd::Run { file, out }) => run_site_file(&file).map_err(Fail::from).and_then(|r| {
            let text = r.to_json_pretty();
            write(&out, &text)?;
            println!("{text}");
            if r.passed() {
                Ok(())
            } else {
                Err(Fail::Check)
            }
        }),
        Cmd::Cyclo(c) => cyclo(c),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check) => ExitCode::from(1),
        Err(Fail::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
