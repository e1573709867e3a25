//! Extensions of G-modules, their cocycles, connecting maps, duals and pushouts.

pub mod augmentation;
pub mod dual;
pub mod split;
pub mod verify;

pub use augmentation::{augmentation_extension, extend_homomorphism, AugmentationData};
pub use dual::{dual_extension, dual_extension_into, DualExtension};
pub use split::{additive_section, Connecting, ExtensionCocycle, SplitExtension};
pub use verify::{allowed_signs, cupprodconn_samples, dual_samples, SignSample};
