use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over the rationals in `nvars` variables
/// `z_1 .. z_nvars`. Terms are kept in graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Poly::term(nvars, Monomial::one(), c)
    }

    /// The coordinate `z_i` (1-based). Panics if `i` is out of range.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars, "variable z{i} outside 1..={nvars}");
        Poly::term(nvars, Monomial::var(i as u32, 1), Rational::one())
    }

    pub fn vars(nvars: usize) -> Vec<Poly> {
        (1..=nvars).map(|i| Poly::var(nvars, i)).collect()
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert!(
            m.max_var() as usize <= nvars,
            "monomial {m:?} outside {nvars} variables"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Sums the given terms, validating variable indices.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = Poly::zero(nvars);
        for (m, c) in terms {
            let v = m.max_var() as usize;
            if v > nvars {
                return Err(Error::IndexOutOfRange { index: v, nvars });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Smallest total degree of a stored term; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Whether variable `i` occurs in any term.
    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i as u32) > 0)
    }

    /// Same polynomial viewed in a different number of variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<Poly> {
        if let Some(v) = self.terms.keys().map(|m| m.max_var() as usize).max() {
            if v > nvars {
                return Err(Error::IndexOutOfRange { index: v, nvars });
            }
        }
        Ok(Poly {
            nvars,
            terms: self.terms.clone(),
        })
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.mul_bounded(other, None))
    }

    /// Product with every term of total degree above `order` discarded; the
    /// skipped pairs are never formed.
    pub fn mul_truncated(&self, other: &Poly, order: u32) -> Poly {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch in product");
        self.mul_bounded(other, Some(order))
    }

    fn mul_bounded(&self, other: &Poly, order: Option<u32>) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        let (small, large) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(small.num_terms() * large.num_terms());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                if let Some(n) = order {
                    // terms are sorted by degree, so the rest are too high as well
                    if ma.degree() + mb.degree() > n {
                        break;
                    }
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        self.pow_bounded(e, None)
    }

    pub fn pow_truncated(&self, e: u32, order: u32) -> Poly {
        self.pow_bounded(e, Some(order))
    }

    fn pow_bounded(&self, e: u32, order: Option<u32>) -> Poly {
        let mut result = Poly::one(self.nvars);
        if let Some(n) = order {
            result = result.truncate(n);
        }
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_bounded(&base, order);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_bounded(&base, order);
            }
        }
        result
    }

    /// Drops every term of total degree above `order`.
    pub fn truncate(&self, order: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous component of total degree `deg`.
    pub fn homogeneous(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `z_i`.
    pub fn derivative(&self, i: usize) -> Result<Poly> {
        if i == 0 || i > self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(i as u32) {
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    /// Substitutes `subs[i-1]` for `z_i`. The result lives in the common
    /// variable space of `subs`.
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly> {
        Ok(compose_many(std::slice::from_ref(self), subs, None)?.remove(0))
    }

    /// Like [`Poly::compose`], discarding terms above `order` throughout.
    pub fn compose_truncated(&self, subs: &[Poly], order: u32) -> Result<Poly> {
        Ok(compose_many(std::slice::from_ref(self), subs, Some(order))?.remove(0))
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t *= num_traits::pow(point[v as usize - 1].clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Uses the graded-lex leading term, which is a monomial order.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars, "dimension mismatch in division");
        let (lm, lc) = divisor.leading_term()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc / lc;
            let step = Poly::term(self.nvars, qm.clone(), qc.clone());
            rem = &rem - &step.mul_bounded(divisor, None);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Human-readable form with variables named `{prefix}1, {prefix}2, ...`,
    /// leading term first.
    pub fn display_with(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    if e == 1 {
                        format!("{prefix}{v}")
                    } else {
                        format!("{prefix}{v}^{e}")
                    }
                })
                .collect();
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, format_rational(&mag));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Composes several polynomials with the same substitution, sharing the
/// cache of substituted powers.
pub fn compose_many(ps: &[Poly], subs: &[Poly], order: Option<u32>) -> Result<Vec<Poly>> {
    let target = subs.first().map_or(0, Poly::nvars);
    for p in ps {
        if p.nvars != subs.len() {
            return Err(Error::DimensionMismatch {
                expected: p.nvars,
                found: subs.len(),
            });
        }
    }
    if let Some(bad) = subs.iter().find(|s| s.nvars != target) {
        return Err(Error::DimensionMismatch {
            expected: target,
            found: bad.nvars,
        });
    }
    let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); subs.len()];
    let mut power = |v: usize, e: u32| -> Poly {
        let cache = &mut powers[v];
        if cache.is_empty() {
            let one = Poly::one(target);
            cache.push(match order {
                Some(n) => one.truncate(n),
                None => one,
            });
        }
        while cache.len() <= e as usize {
            let next = cache.last().unwrap().mul_bounded(&subs[v], order);
            cache.push(next);
        }
        cache[e as usize].clone()
    };
    let mut out = Vec::with_capacity(ps.len());
    for p in ps {
        let mut acc = Poly::zero(target);
        for (m, c) in &p.terms {
            let mut t = Poly::constant(target, c.clone());
            if let Some(n) = order {
                t = t.truncate(n);
            }
            for &(v, e) in m.factors() {
                if t.is_zero() {
                    break;
                }
                let pw = power(v as usize - 1, e);
                t = t.mul_bounded(&pw, order);
            }
            for (tm, tc) in t.terms {
                acc.add_term(tm, tc);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self.display_with("z"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("z"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("dimension mismatch in sum")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("dimension mismatch in difference")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("dimension mismatch in product")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
