//! Exact arithmetic: base fields, polynomials, dual numbers, Laurent series
//! and the elliptic function field.

pub mod dual;
pub mod field;
pub mod fnfield;
pub mod laurent;
pub mod poly;

pub use dual::Dual;
pub use field::{Field, Fp, PrimeField, Q};
pub use fnfield::{FnFieldElem, Point, Weierstrass};
pub use laurent::Laurent;
pub use poly::{Poly, RatFunc};
