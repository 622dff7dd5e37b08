use std::cmp::Ordering;
use std::fmt;

/// A monomial `z_{v1}^{e1} ... z_{vk}^{ek}` stored sparsely as `(variable, exponent)`
/// pairs sorted by variable index. Variables are 1-based; zero exponents are
/// never stored, so the empty monomial is the constant `1`.
///
/// Monomials are ordered graded-lexicographically: total degree first, then
/// the exponent of `z_1`, then `z_2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// `z_var^exp`; an exponent of zero gives the constant monomial.
    pub fn var(var: u32, exp: u32) -> Self {
        assert!(var >= 1, "variable indices are 1-based");
        if exp == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: vec![(var, exp)],
            degree: exp,
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeated variables and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            assert!(v >= 1, "variable indices are 1-based");
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial {
            factors: merged,
            degree,
        }
    }

    /// The product `z_{j1} ... z_{jk}` of a (not necessarily sorted) index tuple.
    pub fn from_indices(indices: &[usize]) -> Self {
        Monomial::from_pairs(indices.iter().map(|&j| (j as u32, 1)))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn exponent(&self, var: u32) -> u32 {
        match self.factors.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(pos) => self.factors[pos].1,
            Err(_) => 0,
        }
    }

    /// Largest variable index present, 0 for the constant monomial.
    pub fn max_var(&self) -> u32 {
        self.factors.last().map_or(0, |&(v, _)| v)
    }

    /// Sorted index tuple with multiplicity, e.g. `z1 z2^2 -> [1, 2, 2]`.
    pub fn indices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v as usize, e as usize))
            .collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            factors: out,
            degree: self.degree + other.degree,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 < v {
                return None;
            }
            if j < other.factors.len() && other.factors[j].0 == v {
                let oe = other.factors[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - oe)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial {
            factors: out,
            degree: self.degree - other.degree,
        })
    }

    /// Removes one power of `var`, returning the old exponent, or `None` if
    /// `var` does not occur.
    pub fn lower(&self, var: u32) -> Option<(u32, Monomial)> {
        let pos = self.factors.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let mut factors = self.factors.clone();
        let exp = factors[pos].1;
        if exp == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some((
            exp,
            Monomial {
                factors,
                degree: self.degree - 1,
            },
        ))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (&(va, ea), &(vb, eb)) in self.factors.iter().zip(&other.factors) {
                if va != vb {
                    // the side carrying the earlier variable is lex-larger
                    return vb.cmp(&va);
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "z{v}")?;
            } else {
                write!(f, "z{v}^{e}")?;
            }
        }
        Ok(())
    }
}
