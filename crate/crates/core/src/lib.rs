//! Exact harmonic analysis on the superspace `R^{m|2n}`.
//!
//! Polynomials in `m` commuting and `2n` anticommuting variables, the
//! invariant operators `Δ`, `R²`, `𝔼`, spherical and generalized harmonic
//! spaces, Fischer decompositions (exceptional superdimensions included),
//! the Cauchy-Kovalevskaya extension, branching laws under
//! `osp(m|2n) ⊃ osp(m−1|2n)` and Gelfand-Tsetlin bases. Every
//! decomposition is certified by exact linear algebra.
//!
//! The algebra is generic over an exact [`Scalar`] field; the aliases below
//! fix it to arbitrary-precision rationals.

pub mod branching;
pub mod ck;
pub mod error;
pub mod exactla;
pub mod gtbasis;
pub mod harmonics;
pub mod operators;
pub mod scalar;
pub mod superpoly;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use superpoly::{SuperMonomial, SuperSignature};

/// Arbitrary-precision rational coefficients.
pub type Rational = num_rational::BigRational;
pub type Poly = superpoly::SuperPolynomial<Rational>;
pub type Space = exactla::Subspace<Rational>;
pub type Matrix = exactla::RationalMatrix<Rational>;
