//! Exact computation of Feigin–Odesskii Poisson structures on projectivized
//! extension spaces over an elliptic curve.

pub mod error;
pub mod fo;
pub mod cech;
pub mod conormal;
pub mod curve;
pub mod linalg;
pub mod selftest;
pub mod ring;
pub mod specseq;

pub use error::{Error, Result};
