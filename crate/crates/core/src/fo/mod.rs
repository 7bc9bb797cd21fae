//! The Poisson map at points of `ℙ Ext¹(V, O)`, its chart bivector and the
//! symplectic-leaf test.

mod bivector;
mod mpoly;
mod point;
mod sweep;

pub use bivector::{
    bivector_chart, chart_matrix, cotangent_basis, jacobi_check, ChartBivector, JacobiReport, MAX_DEGREE,
};
pub use mpoly::{monomials, MPoly};
pub use point::{
    end_dim, fo_matrix, fo_matrix_with, fo_rank, leaf_test, point_from_ss, quotient_span, PoissonPoint,
};
pub use sweep::{
    check_rank_stable, point_classes, projective_points, random_point, random_points, rank_sweep, secant, SweepEntry,
};
