//! Exact polynomial nullspaces of constant-coefficient differential operators
//! and certification of trace seminorms as norms on those nullspaces.
//!
//! The coefficient-level code ([`polyalg`], [`linalg`], [`diffop`]) is generic
//! over the scalar field; the aliases below fix the instantiations used by the
//! pipeline.

// negated float comparisons below are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diffop;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod linalg;
pub mod normtest;
pub mod polyalg;
pub mod scalar;

pub use diffop::{builtin_operator, custom_operator, ellipticity_probe, Builtin, DiffOperator};
pub use error::{Error, Result};
pub use geometry::{StarDomain, SampleGrid};
pub use kernel::{kernel_basis, kernel_dim_profile, KernelBasis};
pub use normtest::{classify, point_measure_test, TraceKind, Verdict, VerdictTag};
pub use polyalg::{monomial_basis, MonomialBasis, MultiIndex, PolyVec};

/// Exact coefficients.
pub type Rational = num_rational::BigRational;
/// Complex numbers with exact rational parts, used for symbol evaluation.
pub type ComplexRational = num_complex::Complex<Rational>;
/// Vector polynomial with exact coefficients.
pub type RationalPoly = PolyVec<Rational>;
/// Vector polynomial with double-precision coefficients (certificates).
pub type FloatPoly = PolyVec<f64>;
