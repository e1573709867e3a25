pub mod error;
pub mod extensions;
pub mod groupcoh;
pub mod modlin;
pub mod pools;
pub mod sign;
pub mod site;
pub mod cyclo;
pub mod harness;

pub use error::{Error, Result};
pub use modlin::{FinAbModule, Mat, ModuleHom};
pub use sign::{Sign, SignSet, SignTally, SignVerdict};
pub use harness::{run_site_file, run_suites, Report, RunConfig, SuiteName};
