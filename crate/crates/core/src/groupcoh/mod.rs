//! Finite groups, G-modules, inhomogeneous cochains and their complexes.

pub mod cochain;
pub mod complex;
pub mod gmodule;
pub mod group;
pub mod sparse;

pub use cochain::{conjugate_cochain, cup, differential, differential_matrix, Cochain};
pub use complex::{check_exact, cone, induced, random_combination, Boundaries, ChainMap, Cohomology, Complex};
pub use gmodule::GModule;
pub use group::FiniteGroup;
pub use sparse::SparseMat;
pub mod ses;
pub mod standard;
pub mod triangle;

pub use ses::ShortExact;
pub use standard::{cochain_complex, group_cohomology, pointwise_map, restriction_map, DEFAULT_MAX_CELLS};
pub use triangle::{compare_cohomology, QuasiIsoReport, Triangle};
