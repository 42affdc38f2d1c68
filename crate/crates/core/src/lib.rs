//! Reinhardt polygons: the cyclotomic divisibility criterion, exhaustive
//! enumeration up to dihedral symmetry, the sporadic construction for
//! `n = pqr`, and geometric realization.
//!
//! Polynomial arithmetic is generic over the coefficient type (`i64`,
//! `i128`, `BigInt`) and geometry over the float type (`f32`, `f64`); the
//! aliases below fix the common choices.

pub mod arith;
pub mod classify;
pub mod composition;
pub mod construct;
pub mod enumerate;
pub mod geometry;
mod mask;
pub mod notation;
pub mod polynomial;
pub mod residue;
pub mod scalar;

pub use classify::{classify, periodic_count, periods, pq_count, Classification, ClassifyError};
pub use composition::{Composition, CompositionError, SignVector, SignVectorError};
pub use enumerate::{enumerate_reinhardt, EnumerationResult, SearchConfig};
pub use polynomial::{cyclotomic, Polynomial, PolynomialError};

/// Exact integer polynomial.
pub type IntPolynomial = Polynomial<num_bigint::BigInt>;
/// Machine-word polynomial; operations report overflow.
pub type SmallPolynomial = Polynomial<i64>;
/// Double-precision realization.
pub type PolygonRealization = geometry::Realization<f64>;
