//! Exact-arithmetic workbench for polynomial systems with identity linear part.
//!
//! The crate covers:
//! - [`ring`]: exact rationals, sparse multivariate polynomials, truncated series;
//! - [`system`]: coupling-tensor systems `F_i = z_i - sum_k W_i^(k)` and Jacobians;
//! - [`inversion`]: formal and polynomial inverses, the parametrized classes
//!   built on the partial inverse `R^{-1}(0, z1)`;
//! - [`reduction`]: the intermediate-field map lowering the degree by one at the
//!   cost of `n^2` extra coordinates, its inverse and instance verification;
//! - [`wick`]: zero-dimensional Gaussian integrals evaluated by Wick
//!   contraction, used as an independent oracle;
//! - [`generators`]: seeded corpora of tame automorphisms and random systems;
//! - [`json`]: the interchange formats.

pub mod det;
pub mod error;
pub mod generators;
pub mod inversion;
pub mod json;
pub mod limits;
pub mod reduction;
pub mod ring;
pub mod system;
pub mod wick;

pub use error::{Error, Result};
pub use limits::{Limits, Progress, Silent, Step};
pub use ring::{Monomial, Poly, Rational, SeriesVec};
pub use system::{JacobianMatrix, PolySystem};
