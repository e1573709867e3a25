//! Sites with local conditions, compactly supported and Selmer complexes,
//! their cup products and the identities relating connecting maps to cups.

pub mod model;

pub use model::{CompactComplex, CompactLes, Local, SiteModel};
pub mod adjunction;
pub mod cups;
pub mod instances;
pub mod selmer;
pub mod splitting;
pub mod twist;
pub mod reciprocity;

pub use adjunction::{verify_pairing_adjunction, AdjunctionPair, AdjunctionReport, AdjunctionSample};
pub use cups::LeibnizSetup;
pub use reciprocity::{reciprocity_suite, Conditional, ReciprocityInstance, ReciprocityReport};
pub use twist::{twist_identification, TwistMap, TwistReport, TwistStatus};
pub use splitting::{splitting_suite, SplittingCase, SplittingReport};
pub use selmer::{local_conditions, selmer_trivialize, CupSample, Flavor, LocalConditions, Obstruction, SelchoReport, SelmerComplexes, SelmerData, Trivialization};
