//! Exact symbolic checks on normalization factors of intertwining operators
//! for classical groups.
//!
//! The generic layers ([`lfactor`], [`matrix`]) are parameterised over the
//! exact scalar; the analysis layers fix it to `i64` through the aliases below.

pub mod analysis;
pub mod lfactor;
pub mod matrix;
pub mod rep;
pub mod scalar;
pub mod scan;
pub mod suites;
pub mod weyl;

/// Exact rationals over machine integers.
pub type Rational = num_rational::Ratio<i64>;
/// `L`-factor argument over [`Rational`].
pub type AffineArg = lfactor::Affine<i64>;
/// Formal L-factor product over [`Rational`].
pub type LFactorProduct = lfactor::LProduct<i64>;
/// Exact integer matrix.
pub type IntMatrix = matrix::BlockMatrix<i64>;
