//! Spectral sequences of filtered complexes and the second differential of an extension.

pub mod filtered;
pub mod massey;

pub use filtered::{FilteredComplex, Page};
pub use massey::{filtered, lift_section, D2Mode, ExtensionSS, QUOT_COMP, SUB_COMP};
