//! Exact scalars, sparse multivariate polynomials and truncated power series.

mod monomial;
mod poly;
mod rational;
mod series;

pub use monomial::Monomial;
pub use poly::{compose_many, Poly};
pub use rational::{factorial, format_rational, int, parse_rational, ratio, Rational};
pub use series::{series_div, series_recip, series_truncate, SeriesVec};

use crate::error::Result;

/// Term-wise exact sum.
pub fn poly_add(a: &Poly, b: &Poly) -> Result<Poly> {
    a.try_add(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.try_mul(b)
}

/// Substitutes `subs[i-1]` for variable `i` of `p`.
pub fn poly_compose(p: &Poly, subs: &[Poly]) -> Result<Poly> {
    p.compose(subs)
}

pub fn poly_derivative(p: &Poly, i: usize) -> Result<Poly> {
    p.derivative(i)
}
