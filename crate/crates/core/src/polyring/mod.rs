//! Exact arithmetic kernel.
//!
//! The universal scalar of the whole crate is the multivariate rational
//! function over ℚ in coordinates `u1..uN`, optionally extended by formal
//! pencil parameters (`lam`, `lam1`, `lam2`). Polynomials are kept in a
//! canonical sparse form (ordered term map, no zero coefficients), so
//! structural equality of term maps is semantic equality and "is this
//! identically zero" is decidable by inspection.
//!
//! Rational functions are deliberately *not* kept gcd-reduced; equality uses
//! cross-multiplication. A cheap exact-division pass keeps denominators from
//! compounding where a factor cancels outright, which is all the curvature
//! computations need in practice.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod tensor;
pub mod zerotest;

pub use matrix::{PolyMatrix, RfMatrix};
pub use poly::{Polynomial, VarSet};
pub use ratfunc::RationalFunction;
pub use rational::{rat, ratio, Rational};
pub use tensor::Tensor;
pub use zerotest::{IdentityTestConfig, Indeterminate, TestMode};
