// Index loops are kept explicit throughout: they mirror the tensor formulas
// they implement.
#![allow(clippy::needless_range_loop)]

//! Exact computer-algebra kernel for verifying the algebraic and
//! differential-geometric identities behind compatible constant-curvature
//! metric pencils, nonlocal hydrodynamic-type Poisson brackets, their
//! canonical potential deformations, and the associated quasi-Frobenius /
//! Novikov / Frobenius algebra structures.
//!
//! Everything is computed over ℚ: inputs are polynomial, intermediates are
//! rational functions, and every verdict is an exact polynomial identity
//! (optionally re-checked by seeded Schwartz–Zippel sampling). There is no
//! floating point anywhere in this crate.
//!
//! Module map:
//! - [`polyring`] — arbitrary-precision rationals, sparse multivariate
//!   polynomials, rational functions, matrices, tensors, zero-testing.
//! - [`geometry`] — contravariant metrics, Levi-Civita connections, the
//!   constant-curvature obstruction, and metric-pencil compatibility.
//! - [`brackets`] — hydrodynamic bracket coefficients, the five Poisson
//!   conditions, bracket pencils, and the canonical potential form.
//! - [`deformations`] — the integrable deformation system on potentials
//!   H^i(u), its quadratic/cubic structure-constant families, potential
//!   extraction, and the associativity (WDVV) reduction.
//! - [`algebras`] — structure-constant algebras and the quasi-Frobenius,
//!   Frobenius, Novikov, and left-symmetry identity checks.

pub mod algebras;
pub mod brackets;
pub mod deformations;
pub mod geometry;
pub mod polyring;
pub mod sample;

pub use polyring::{
    poly::{Polynomial, VarSet},
    ratfunc::RationalFunction,
    rational::{rat, ratio, Rational},
    zerotest::{IdentityTestConfig, Indeterminate, TestMode},
};
