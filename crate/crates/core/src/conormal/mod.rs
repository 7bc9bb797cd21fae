//! Intrinsic derivatives of the Poisson map, the conormal Lie bracket at
//! degenerate points and its comparison with traceless endomorphisms.

mod compare;
mod derivative;
mod lie;

pub use compare::{compare, conormal_bracket, kernel_to_end0, lemma_check, quotient_component, Comparison};
pub use derivative::{derivative_form, intrinsic_derivative, specialization_check, IntrinsicDerivative};
pub use lie::{end0_structure_constants, LieStructure};
