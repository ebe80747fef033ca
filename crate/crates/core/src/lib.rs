//! Exact symbolic computation for superalgebras of Krichever-Novikov type
//! on the 2- and 3-punctured Riemann sphere.
//!
//! Everything is computed over the field `K = Q(sqrt(2))(beta)` with
//! `alpha = beta^2`, so every identity is checked exactly: residue calculus,
//! Lie superalgebra 2-cocycles, dual-valued 1-cocycles on the Lie and Jordan
//! sides, and the associated golden structure tables.

pub mod antijordan;
pub mod density;
pub mod eval;
pub mod expr;
pub mod liesuper;
pub mod linalg;
pub mod merofun;
pub mod scalar;
pub mod suites;

pub use density::{BasisIndex, Density, Family, HalfInt};
pub use merofun::{Config, MeroFun, PoleMode};
pub use scalar::{Q2, Rational, Scalar};
