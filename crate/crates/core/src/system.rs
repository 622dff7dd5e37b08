//! Polynomial systems `F_i(z) = z_i - sum_k W_i^(k)(z)` stored as coupling
//! tensors, and their Jacobian machinery.
//!
//! Couplings are kept symmetrized: the coefficient of `z_{j1} ... z_{jk}` in
//! `W_i^(k)` is stored once, under the ascending index tuple `(j1 <= ... <= jk)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::det;
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, Rational};

/// Storage key of one coupling constant `w^(k)_{row, js}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub k: u32,
    pub row: usize,
    pub js: Vec<usize>,
}

impl Slot {
    pub fn new(row: usize, mut js: Vec<usize>) -> Self {
        js.sort_unstable();
        Slot {
            k: js.len() as u32,
            row,
            js,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolySystem {
    n: usize,
    d: u32,
    couplings: BTreeMap<Slot, Rational>,
}

impl PolySystem {
    /// The identity system in `n` variables with declared degree `d`.
    pub fn identity(n: usize, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree {
                found: d,
                reason: "interaction degree must be at least 2",
            });
        }
        Ok(PolySystem {
            n,
            d,
            couplings: BTreeMap::new(),
        })
    }

    /// Builds a system from `(row, index tuple, coefficient)` triples. Tuples
    /// are sorted and repeated slots accumulate.
    pub fn from_couplings<I>(n: usize, d: u32, couplings: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Vec<usize>, Rational)>,
    {
        let mut sys = PolySystem::identity(n, d)?;
        for (row, js, c) in couplings {
            sys.add_coupling(row, js, c)?;
        }
        Ok(sys)
    }

    pub(crate) fn add_coupling(&mut self, row: usize, js: Vec<usize>, c: Rational) -> Result<()> {
        if row == 0 || row > self.n {
            return Err(Error::IndexOutOfRange {
                index: row,
                nvars: self.n,
            });
        }
        if let Some(&bad) = js.iter().find(|&&j| j == 0 || j > self.n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                nvars: self.n,
            });
        }
        let k = js.len() as u32;
        if k < 2 || k > self.d {
            return Err(Error::InvalidDegree {
                found: k,
                reason: "coupling order must lie in 2..=d",
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = Slot::new(row, js);
        let entry = self.couplings.entry(slot.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.couplings.remove(&slot);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared maximal interaction degree (at least the degree of any coupling).
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn couplings(&self) -> impl Iterator<Item = (&Slot, &Rational)> {
        self.couplings.iter()
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    pub fn coupling(&self, row: usize, js: &[usize]) -> Rational {
        self.couplings
            .get(&Slot::new(row, js.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.couplings.is_empty()
    }

    /// Largest order `k` carrying a nonzero coupling; 1 for the identity.
    pub fn effective_degree(&self) -> u32 {
        self.couplings.keys().map(|s| s.k).max().unwrap_or(1)
    }

    /// Same couplings with a different declared degree.
    pub fn with_degree(&self, d: u32) -> Result<Self> {
        if d < 2 || d < self.effective_degree() {
            return Err(Error::InvalidDegree {
                found: d,
                reason: "declared degree below the couplings present",
            });
        }
        Ok(PolySystem {
            n: self.n,
            d,
            couplings: self.couplings.clone(),
        })
    }

    /// Declared degree lowered to the actual one (never below 2).
    pub fn normalized_degree(&self) -> Self {
        PolySystem {
            n: self.n,
            d: self.effective_degree().max(2),
            couplings: self.couplings.clone(),
        }
    }

    /// `W_i^(k)` as a polynomial in `n` variables.
    pub fn interaction_of_order(&self, i: usize, k: u32) -> Poly {
        let terms = self
            .couplings
            .iter()
            .filter(|(s, _)| s.row == i && s.k == k)
            .map(|(s, c)| (Monomial::from_indices(&s.js), c.clone()));
        Poly::from_terms(self.n, terms).expect("couplings are within range")
    }

    /// `W_i = sum_k W_i^(k)`.
    pub fn interaction(&self, i: usize) -> Poly {
        let terms = self
            .couplings
            .iter()
            .filter(|(s, _)| s.row == i)
            .map(|(s, c)| (Monomial::from_indices(&s.js), c.clone()));
        Poly::from_terms(self.n, terms).expect("couplings are within range")
    }

    pub fn interactions(&self) -> Vec<Poly> {
        let mut rows: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.n];
        for (s, c) in &self.couplings {
            rows[s.row - 1].push((Monomial::from_indices(&s.js), c.clone()));
        }
        rows.into_iter()
            .map(|t| Poly::from_terms(self.n, t).expect("couplings are within range"))
            .collect()
    }

    /// The coordinate polynomials `F_i = z_i - W_i`.
    pub fn to_polys(&self) -> Vec<Poly> {
        self.interactions()
            .into_iter()
            .enumerate()
            .map(|(i, w)| &Poly::var(self.n, i + 1) - &w)
            .collect()
    }

    /// Reads the couplings off coordinate polynomials. The declared degree is
    /// the actual degree, at least 2.
    pub fn from_polys(polys: &[Poly]) -> Result<Self> {
        Self::from_polys_inner(polys, None)
    }

    /// Like [`PolySystem::from_polys`] with an explicit declared degree.
    pub fn from_polys_with_degree(polys: &[Poly], d: u32) -> Result<Self> {
        Self::from_polys_inner(polys, Some(d))
    }

    fn from_polys_inner(polys: &[Poly], d: Option<u32>) -> Result<Self> {
        let n = polys.len();
        if let Some(bad) = polys.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        let actual = polys.iter().filter_map(Poly::degree).max().unwrap_or(0).max(2);
        let d = d.unwrap_or(actual);
        if d < actual {
            return Err(Error::InvalidDegree {
                found: d,
                reason: "declared degree below the polynomial degree",
            });
        }
        let mut sys = PolySystem::identity(n, d)?;
        for (idx, p) in polys.iter().enumerate() {
            let i = idx + 1;
            if !p.constant_term().is_zero() {
                return Err(Error::NonzeroConstant { component: i });
            }
            for (m, c) in p.terms() {
                match m.degree() {
                    0 => unreachable!("constant handled above"),
                    1 => {
                        let v = m.max_var() as usize;
                        let identity = v == i && c.is_one();
                        if !identity {
                            return Err(Error::NonIdentityLinearPart { component: i });
                        }
                    }
                    _ => sys.add_coupling(i, m.indices(), -c.clone())?,
                }
            }
            if p.coeff(&Monomial::var(i as u32, 1)) != Rational::one() {
                return Err(Error::NonIdentityLinearPart { component: i });
            }
        }
        Ok(sys)
    }

    pub fn jacobian_matrix(&self) -> JacobianMatrix {
        let polys = self.to_polys();
        let entries = (1..=self.n)
            .map(|i| {
                polys
                    .iter()
                    .map(|fj| fj.derivative(i).expect("index in range"))
                    .collect()
            })
            .collect();
        JacobianMatrix { n: self.n, entries }
    }

    pub fn jacobian_det(&self) -> Poly {
        self.jacobian_matrix().det()
    }

    /// Whether `det J_F` is a nonzero constant. With identity linear part the
    /// constant is necessarily 1.
    pub fn is_jlin(&self) -> bool {
        matches!(self.jacobian_det().as_constant(), Some(c) if !c.is_zero())
    }

    /// The system whose coordinates are `F(G(z))`, with the composite degree
    /// recorded as the declared degree.
    pub fn compose(&self, g: &PolySystem) -> Result<PolySystem> {
        if self.n != g.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.n,
            });
        }
        let inner = g.to_polys();
        let outer = self.to_polys();
        let composed = crate::ring::compose_many(&outer, &inner, None)?;
        PolySystem::from_polys(&composed)
    }
}

/// `entries[i-1][j-1] = dF_j / dz_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianMatrix {
    n: usize,
    entries: Vec<Vec<Poly>>,
}

impl JacobianMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn det(&self) -> Poly {
        det::determinant(&self.entries, self.n)
    }

    /// Substitutes `subs` into every entry; the result lives in the variable
    /// space of `subs`.
    pub fn substitute(&self, subs: &[Poly]) -> Result<Vec<Vec<Poly>>> {
        self.entries
            .iter()
            .map(|row| crate::ring::compose_many(row, subs, None))
            .collect()
    }
}

/// Free-function form of [`PolySystem::compose`].
pub fn compose_systems(f: &PolySystem, g: &PolySystem) -> Result<PolySystem> {
    f.compose(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn z(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    /// (z1 + z2^3, z2)
    pub(crate) fn worked_example() -> PolySystem {
        PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(-1))]).unwrap()
    }

    fn quadratic_negative() -> PolySystem {
        // (z1 - z2^2, z2 - z1^2)
        PolySystem::from_couplings(2, 2, [(1, vec![2, 2], int(1)), (2, vec![1, 1], int(1))]).unwrap()
    }

    #[test]
    fn from_polys_worked_example() {
        let f1 = &z(2, 1) + &z(2, 2).pow(3);
        let sys = PolySystem::from_polys(&[f1, z(2, 2)]).unwrap();
        assert_eq!(sys, worked_example());
        assert_eq!(sys.coupling(1, &[2, 2, 2]), int(-1));
        assert_eq!(sys.d(), 3);
    }

    #[test]
    fn from_polys_identity_and_quadratic() {
        let id = PolySystem::from_polys(&Poly::vars(3)).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.d(), 2);

        let f1 = &z(2, 1) - &(&z(2, 1) * &z(2, 2));
        let sys = PolySystem::from_polys(&[f1, z(2, 2)]).unwrap();
        assert_eq!(sys.coupling(1, &[2, 1]), int(1));
        assert_eq!(sys.num_couplings(), 1);
    }

    #[test]
    fn from_polys_rejects_bad_linear_part() {
        let f1 = &z(2, 1) + &z(2, 2);
        assert_eq!(
            PolySystem::from_polys(&[f1, z(2, 2)]),
            Err(Error::NonIdentityLinearPart { component: 1 })
        );
        let f1 = z(2, 1).scale(&int(2));
        assert_eq!(
            PolySystem::from_polys(&[f1, z(2, 2)]),
            Err(Error::NonIdentityLinearPart { component: 1 })
        );
        let f2 = &z(2, 2) + &Poly::one(2);
        assert_eq!(
            PolySystem::from_polys(&[z(2, 1), f2]),
            Err(Error::NonzeroConstant { component: 2 })
        );
        assert_eq!(
            PolySystem::from_polys(&[Poly::zero(2), z(2, 2)]),
            Err(Error::NonIdentityLinearPart { component: 1 })
        );
    }

    #[test]
    fn to_polys_identity() {
        let id = PolySystem::identity(2, 2).unwrap();
        assert_eq!(id.to_polys(), Poly::vars(2));
        let ex = worked_example();
        assert_eq!(PolySystem::from_polys(&ex.to_polys()).unwrap(), ex);
    }

    #[test]
    fn coupling_validation() {
        assert!(PolySystem::from_couplings(2, 3, [(3, vec![1, 1], int(1))]).is_err());
        assert!(PolySystem::from_couplings(2, 3, [(1, vec![1, 3], int(1))]).is_err());
        assert!(PolySystem::from_couplings(2, 2, [(1, vec![1, 1, 1], int(1))]).is_err());
        assert!(PolySystem::from_couplings(2, 2, [(1, vec![1], int(1))]).is_err());
        assert!(PolySystem::identity(2, 1).is_err());
        let cancelled = PolySystem::from_couplings(2, 2, [(1, vec![1, 2], int(1)), (1, vec![2, 1], int(-1))]).unwrap();
        assert!(cancelled.is_identity());
    }

    #[test]
    fn jacobian_of_worked_example() {
        let j = worked_example().jacobian_matrix();
        assert_eq!(j.entry(1, 1), &Poly::one(2));
        assert!(j.entry(1, 2).is_zero());
        assert_eq!(j.entry(2, 1), &z(2, 2).pow(2).scale(&int(3)));
        assert_eq!(j.entry(2, 2), &Poly::one(2));
        assert_eq!(worked_example().jacobian_det(), Poly::one(2));
        assert!(worked_example().is_jlin());
    }

    #[test]
    fn jacobian_of_quadratic_negative() {
        let f = quadratic_negative();
        let j = f.jacobian_matrix();
        assert_eq!(j.entry(1, 2), &z(2, 1).scale(&int(-2)));
        assert_eq!(j.entry(2, 1), &z(2, 2).scale(&int(-2)));
        let expected = &Poly::one(2) - &(&z(2, 1) * &z(2, 2)).scale(&int(4));
        assert_eq!(f.jacobian_det(), expected);
        assert!(!f.is_jlin());
    }

    #[test]
    fn identity_jacobian() {
        let id = PolySystem::identity(4, 3).unwrap();
        let j = id.jacobian_matrix();
        for i in 1..=4 {
            for k in 1..=4 {
                let expected = if i == k { Poly::one(4) } else { Poly::zero(4) };
                assert_eq!(j.entry(i, k), &expected);
            }
        }
        assert_eq!(id.jacobian_det(), Poly::one(4));
        assert!(id.is_jlin());
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let f = worked_example();
        let g = PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(1))]).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        let id = PolySystem::identity(2, 2).unwrap();
        assert_eq!(f.compose(&id).unwrap(), f);
        assert!(f.compose(&PolySystem::identity(3, 2).unwrap()).is_err());
    }
}
