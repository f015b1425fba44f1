//! Double-point interpolation in weighted projective space.
//!
//! The crate computes Hilbert functions of weighted polynomial rings, builds
//! evaluation matrices for fat points and decides the AH property by exact
//! rank. On top of that sit explicit point-ideal generators, the Terracini
//! induction engine with checkable certificates for `P(1,2,3)`, the
//! exception bounds for `P(1,b,c)` and secant dimensions of weighted
//! Veronese varieties.

pub mod bounds;
pub mod error;
pub mod field;
pub mod grading;
pub mod ideals;
pub mod induction;
pub mod interpolation;
pub mod linalg;
pub mod poly;
pub mod veronese;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rational, Rationals, ResolvedField};
pub use grading::{
    count_monomials, count_monomials_big, enumerate_monomials, hilbert_closed_form, semigroup_member, HilbertTable,
    Monomial, Weights,
};
pub use poly::{SparsePoly, WeightedPoint};

/// Version string embedded in every output artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
