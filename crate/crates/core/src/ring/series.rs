use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A vector of multivariate power series, each truncated at total degree
/// `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesVec {
    components: Vec<Poly>,
    order: u32,
}

impl SeriesVec {
    /// Truncates every component at `order`.
    pub fn new(components: Vec<Poly>, order: u32) -> Self {
        let components = components.into_iter().map(|p| p.truncate(order)).collect();
        SeriesVec { components, order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Poly> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Re-truncates at a lower order.
    pub fn truncate(&self, order: u32) -> SeriesVec {
        SeriesVec::new(self.components.clone(), order.min(self.order))
    }
}

/// Drops all terms of total degree above `order`.
pub fn series_truncate(p: &Poly, order: u32) -> Poly {
    p.truncate(order)
}

/// `num / den` as power series truncated at `order`. The constant term of
/// `den` must be nonzero.
pub fn series_div(num: &Poly, den: &Poly, order: u32) -> Result<Poly> {
    let c0 = den.constant_term();
    if c0.is_zero() {
        return Err(Error::NonUnitSeries);
    }
    if num.nvars() != den.nvars() {
        return Err(Error::DimensionMismatch {
            expected: num.nvars(),
            found: den.nvars(),
        });
    }
    let inv_c0 = Rational::one() / c0;
    let den_parts: Vec<Poly> = (0..=order).map(|k| den.homogeneous(k)).collect();
    let mut quot_parts: Vec<Poly> = Vec::with_capacity(order as usize + 1);
    // q_m = (n_m - sum_{k>=1} d_k q_{m-k}) / d_0, one homogeneous degree at a time
    for m in 0..=order {
        let mut rhs = num.homogeneous(m);
        for k in 1..=m {
            let dk = &den_parts[k as usize];
            if dk.is_zero() {
                continue;
            }
            rhs = &rhs - &(dk * &quot_parts[(m - k) as usize]);
        }
        quot_parts.push(rhs.scale(&inv_c0));
    }
    let mut out = Poly::zero(num.nvars());
    for part in quot_parts {
        out = &out + &part;
    }
    Ok(out)
}

/// `1 / den` truncated at `order`.
pub fn series_recip(den: &Poly, order: u32) -> Result<Poly> {
    series_div(&Poly::one(den.nvars()), den, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::int;

    #[test]
    fn geometric_series() {
        // 1 / (1 - z) = 1 + z + z^2 + z^3
        let z = Poly::var(1, 1);
        let den = &Poly::one(1) - &z;
        let q = series_recip(&den, 3).unwrap();
        let expected = (0..=3).fold(Poly::zero(1), |acc, k| &acc + &z.pow(k));
        assert_eq!(q, expected);
    }

    #[test]
    fn division_roundtrip() {
        let x = Poly::var(2, 1);
        let y = Poly::var(2, 2);
        let den = &(&Poly::one(2) + &x) - &(&y * &y).scale(&int(3));
        let num = &(&x * &y) + &Poly::constant(2, int(5));
        let q = series_div(&num, &den, 6).unwrap();
        assert_eq!((&q * &den).truncate(6), num.truncate(6));
    }

    #[test]
    fn zero_constant_term_is_an_error() {
        let z = Poly::var(1, 1);
        assert_eq!(series_recip(&z, 3), Err(Error::NonUnitSeries));
    }

    #[test]
    fn construction_truncates() {
        let z = Poly::var(1, 1);
        let s = SeriesVec::new(vec![&z + &z.pow(3)], 2);
        assert_eq!(s.components()[0], z);
    }
}
