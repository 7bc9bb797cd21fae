//! Čech cohomology of bundles on the two-chart cover.

pub mod bundle;
pub mod complex;
pub mod deform;
pub mod endo;
pub mod ext;
pub mod frac;
pub mod setting;

pub use bundle::{mat_add, mat_apply, mat_mul, mat_neg, Bundle, FracMatrix};
pub use complex::{serre_pairing, stable_dims, Budget, C0Gen, CechComplex, Cohomology};
pub use frac::{Ctx, Frac};
pub use ext::{chart_index, ext_degrees, hom_degrees, reduce_mod, ExtSpace};
pub use setting::{default_budget, Setting};
pub use endo::{deformation_is_trivial, end_algebra, matrix_coords, matrix_degree, ChartSystem, EndAlgebra};
pub use deform::{ad_matrix, check_dual_rule, check_end_rule, check_tensor_rule, deform_bundle, deformation_class, kron};
