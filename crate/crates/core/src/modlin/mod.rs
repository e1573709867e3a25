//! Exact linear algebra over `Z` and `Z/N`.

pub mod hom;
pub mod howell;
pub mod mat;
pub mod module;
pub mod snf;
pub mod subquotient;
pub mod zn;

pub use hom::{dual, dual_into, hom_module, swap_map, tensor, transpose_hom, HomModule, Pairing, TensorModule};
pub use howell::Span;
pub use mat::Mat;
pub use module::{DirectSum, FinAbModule, ModuleHom, ENUMERATION_LIMIT};
pub use snf::{smith_normal_form, Snf};
pub use subquotient::{cokernel, image, kernel, solve, Subquotient};
