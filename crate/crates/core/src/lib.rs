//! Exact computations in Lie algebras of polynomial vector fields.

pub mod catalog;
pub mod error;
pub mod freelie;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod realize;
pub mod relexpr;
pub mod scalar;
pub mod tables;
pub mod verifier;

#[cfg(test)]
mod laws;

pub use error::{Error, Result};
pub use poly::{ArithOp, ContextKind, Monomial, VarContext};
pub use scalar::{rat, Rational, Scalar, Zp};

pub type Polynomial = poly::Polynomial<Rational>;
pub type VectorField = realize::VectorField<Rational>;
