//! Zero-dimensional Gaussian integrals evaluated by Wick contraction.
//!
//! This module never calls the fixed-point inversion: every series is built
//! by expanding the exponential of the interaction and the sources into
//! monomials and replacing each monomial by its Gaussian moment. It therefore
//! serves as an independent oracle for the inversion and reduction code.
//!
//! The complex Gaussian is normalized so that `E[1] = 1` and
//! `E[phi_i conj(phi_j)] = delta_ij`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::inversion::formal_inverse;
use crate::limits::Limits;
use crate::ring::{factorial, series_div, series_recip, Monomial, Poly, Rational};
use crate::system::PolySystem;

/// A Gaussian moment `E[prod phi_{phis} prod conj(phi)_{phibars}]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MomentSpec {
    pub phis: Vec<usize>,
    pub phibars: Vec<usize>,
}

impl MomentSpec {
    pub fn new(phis: Vec<usize>, phibars: Vec<usize>) -> Self {
        MomentSpec { phis, phibars }
    }
}

/// Sum over bijections between the `phi` and `conj(phi)` factors of the
/// product of index matches. The delta matrix is block diagonal with all-ones
/// blocks, so the permanent is the product of the block factorials.
pub fn complex_gaussian_moment(spec: &MomentSpec) -> Rational {
    if spec.phis.len() != spec.phibars.len() {
        return Rational::zero();
    }
    let mut counts: BTreeMap<usize, (u32, u32)> = BTreeMap::new();
    for &i in &spec.phis {
        counts.entry(i).or_default().0 += 1;
    }
    for &i in &spec.phibars {
        counts.entry(i).or_default().1 += 1;
    }
    let mut perm = BigInt::one();
    for (a, b) in counts.values() {
        if a != b {
            return Rational::zero();
        }
        perm *= factorial(*a);
    }
    Rational::from_integer(perm)
}

/// `E[x^(2k)]` for a standard real Gaussian, obtained by differentiating the
/// source generating function `exp(J^2 / 2)` `2k` times at `J = 0`.
pub fn real_gaussian_moment(k: u32) -> Rational {
    // exp(J^2/2) through degree 2k: sum_m J^(2m) / (2^m m!)
    let mut gen = Poly::zero(1);
    for m in 0..=k {
        let den = BigInt::from(2u32).pow(m) * factorial(m);
        gen = &gen + &Poly::term(1, Monomial::var(1, 2 * m), Rational::new(BigInt::one(), den));
    }
    for _ in 0..2 * k {
        gen = gen.derivative(1).expect("single variable");
    }
    gen.constant_term()
}

/// Real Gaussian expectation over variable `var`, leaving the others formal.
fn integrate_real(p: &Poly, var: u32) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for (m, c) in p.terms() {
        let e = m.exponent(var);
        if e % 2 == 1 {
            continue;
        }
        let rest = Monomial::from_pairs(m.factors().iter().copied().filter(|&(v, _)| v != var));
        out.add_term(rest, c * real_gaussian_moment(e / 2));
    }
    out
}

/// Truncated series in the sources `u_1..u_nvars` (or, for the toy checks, in
/// the single coupling `lambda`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingSeries {
    pub order: u32,
    pub series: Poly,
}

impl CouplingSeries {
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.series.coeff(m)
    }
}

/// The expansion of `exp(phibar . W(phi))` graded by its phi-excess
/// `#phi - #phibar`, which every vertex raises by at least one.
struct Expansion {
    n: usize,
    nsrc: usize,
    order: u32,
    weights: Poly,
}

impl Expansion {
    fn new(f: &PolySystem, nsrc: usize, order: u32) -> Result<Self> {
        let n = f.n();
        if nsrc > n {
            return Err(Error::InvalidSplit { nprime: nsrc, n });
        }
        let vars = 2 * n;
        // phi_i -> variable i, conj(phi_i) -> variable n + i
        let mut vertex = Poly::zero(vars);
        for (i, w) in f.interactions().iter().enumerate() {
            for (m, c) in w.terms() {
                let mono = m.mul(&Monomial::var((n + i + 1) as u32, 1));
                vertex.add_term(mono, c.clone());
            }
        }
        let excess = |m: &Monomial| -> i64 {
            m.factors()
                .iter()
                .map(|&(v, e)| if (v as usize) <= n { e as i64 } else { -(e as i64) })
                .sum()
        };
        let prune = |p: Poly| -> Poly {
            let kept = p
                .terms()
                .filter(|(m, _)| excess(m) <= order as i64)
                .map(|(m, c)| (m.clone(), c.clone()));
            Poly::from_terms(vars, kept).expect("same variable space")
        };
        let mut weights = Poly::one(vars);
        let mut power = Poly::one(vars);
        for v in 1..=order {
            power = prune(&power * &vertex).scale(&Rational::new(BigInt::one(), BigInt::from(v)));
            if power.is_zero() {
                break;
            }
            weights = &weights + &power;
        }
        Ok(Expansion {
            n,
            nsrc,
            order,
            weights,
        })
    }

    /// `E[phi_insert * exp(phibar.W(phi) + phibar.u)]` through u-degree `order`.
    fn correlator(&self, insert: Option<usize>, limits: &Limits) -> Result<Poly> {
        let n = self.n;
        let mut out = Poly::zero(self.nsrc);
        let mut evaluations: BTreeMap<u32, u64> = BTreeMap::new();
        for (m, c) in self.weights.terms() {
            let mut a = vec![0u32; n];
            let mut b = vec![0u32; n];
            for &(v, e) in m.factors() {
                let v = v as usize;
                if v <= n {
                    a[v - 1] += e;
                } else {
                    b[v - n - 1] += e;
                }
            }
            if let Some(i) = insert {
                a[i - 1] += 1;
            }
            // the source factor exp(phibar.u) must supply exactly a - b conjugate fields
            let mut src = Vec::with_capacity(n);
            let mut feasible = true;
            for k in 0..n {
                if a[k] < b[k] || (k >= self.nsrc && a[k] > b[k]) {
                    feasible = false;
                    break;
                }
                src.push(a[k] - b[k]);
            }
            let degree: u32 = src.iter().sum();
            if !feasible || degree > self.order {
                continue;
            }
            let count = evaluations.entry(degree).or_default();
            *count += 1;
            if *count > limits.max_moments {
                return Err(Error::limit(
                    "moment evaluations per coefficient",
                    *count,
                    limits.max_moments,
                ));
            }
            let spec = MomentSpec {
                phis: expand_counts(&a),
                phibars: expand_counts(&b.iter().zip(&src).map(|(x, y)| x + y).collect::<Vec<_>>()),
            };
            let moment = complex_gaussian_moment(&spec);
            if moment.is_zero() {
                continue;
            }
            let denom: BigInt = src.iter().map(|&e| factorial(e)).product();
            let u = Monomial::from_pairs(src.iter().enumerate().take(self.nsrc).map(|(k, &e)| (k as u32 + 1, e)));
            let coeff = c * moment / Rational::from_integer(denom);
            out.add_term(u, coeff);
        }
        Ok(out)
    }
}

fn expand_counts(counts: &[u32]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(k, &e)| std::iter::repeat_n(k + 1, e as usize))
        .collect()
}

/// `Z(0, u)` through total u-degree `order`.
pub fn z_series(f: &PolySystem, order: u32) -> Result<CouplingSeries> {
    z_series_with(f, f.n(), order, &Limits::default())
}

/// `Z(0, (u1, 0))` with sources only on the first `nsrc` coordinates.
pub fn z_series_with(f: &PolySystem, nsrc: usize, order: u32, limits: &Limits) -> Result<CouplingSeries> {
    let exp = Expansion::new(f, nsrc, order)?;
    Ok(CouplingSeries {
        order,
        series: exp.correlator(None, limits)?,
    })
}

/// One-point function `<phi_i>` = (phi_i-inserted series) / `Z(0, u)`.
pub fn one_point_series(f: &PolySystem, i: usize, order: u32) -> Result<CouplingSeries> {
    one_point_series_with(f, i, f.n(), order, &Limits::default())
}

pub fn one_point_series_with(
    f: &PolySystem,
    i: usize,
    nsrc: usize,
    order: u32,
    limits: &Limits,
) -> Result<CouplingSeries> {
    if i == 0 || i > f.n() {
        return Err(Error::IndexOutOfRange { index: i, nvars: f.n() });
    }
    let exp = Expansion::new(f, nsrc, order)?;
    let z = exp.correlator(None, limits)?;
    let num = exp.correlator(Some(i), limits)?;
    Ok(CouplingSeries {
        order,
        series: series_div(&num, &z, order)?,
    })
}

/// Coefficient lists of a one-variable identity in `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaIdentity {
    pub order: u32,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

impl LambdaIdentity {
    pub fn matched(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Both sides of the sextic intermediate-field identity through `lambda^order`:
/// the direct expansion of `E[exp(-lambda phi^6)]` and the expansion of
/// `E[exp(i sqrt(2 lambda) phi^3 sigma)]` over `sigma` then `phi`.
///
/// The second side is expanded in `s = i sqrt(2 lambda)`; only even powers
/// survive the sigma integral and `s^2 = -2 lambda` is applied symbolically,
/// so no irrational or complex number is ever formed.
pub fn phi6_identity(order: u32) -> LambdaIdentity {
    let (phi, sigma, s) = (1u32, 2u32, 3u32);
    let mut lhs = vec![Rational::zero(); order as usize + 1];
    let mut rhs = vec![Rational::zero(); order as usize + 1];

    // direct side: exp(-lambda phi^6) = sum_m (-1)^m lambda^m phi^(6m) / m!
    for m in 0..=order {
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let c = Rational::new(sign, factorial(m));
        lhs[m as usize] = c * real_gaussian_moment(3 * m);
    }

    // intermediate side: exp(s phi^3 sigma) through s^(2 order)
    let x = Poly::term(3, Monomial::from_pairs([(s, 1), (phi, 3), (sigma, 1)]), Rational::one());
    let mut expansion = Poly::zero(3);
    let mut power = Poly::one(3);
    for r in 0..=2 * order {
        if r > 0 {
            power = (&power * &x).scale(&Rational::new(BigInt::one(), BigInt::from(r)));
        }
        expansion = &expansion + &power;
    }
    let after_sigma = integrate_real(&expansion, sigma);
    for (m, c) in after_sigma.terms() {
        let r = m.exponent(s);
        debug_assert!(r % 2 == 0, "odd sigma orders integrate to zero");
        let half = r / 2;
        // s^(2m) = (i^2 * 2 lambda)^m = (-2)^m lambda^m
        let factor = Rational::from_integer(BigInt::from(-2).pow(half));
        let phi_moment = if m.exponent(phi) % 2 == 0 {
            real_gaussian_moment(m.exponent(phi) / 2)
        } else {
            Rational::zero()
        };
        rhs[half as usize] += c * factor * phi_moment;
    }
    LambdaIdentity { order, lhs, rhs }
}

/// Whether both sides of the sextic intermediate-field identity agree
/// through `lambda^order`.
pub fn phi6_intermediate_identity(order: u32) -> bool {
    phi6_identity(order).matched()
}

/// `(2k - 1)!!` from its closed form.
pub fn odd_double_factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1))
}

/// Per-component comparison of two lists of series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesIdentity {
    pub order: u32,
    pub lhs: Vec<Poly>,
    pub rhs: Vec<Poly>,
}

impl SeriesIdentity {
    pub fn matched(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Z(0, u)` against `1 / det J_F(G(u))` with `G` the formal inverse.
pub fn z_det_identity(f: &PolySystem, order: u32, limits: &Limits) -> Result<SeriesIdentity> {
    let z = z_series_with(f, f.n(), order, limits)?.series;
    let g = formal_inverse(f, order);
    let det_along = f.jacobian_det().compose_truncated(g.components(), order)?;
    let recip = series_recip(&det_along, order)?;
    Ok(SeriesIdentity {
        order,
        lhs: vec![z],
        rhs: vec![recip],
    })
}

/// One-point functions against the formal inverse, component by component.
pub fn one_point_identity(f: &PolySystem, order: u32, limits: &Limits) -> Result<SeriesIdentity> {
    let exp = Expansion::new(f, f.n(), order)?;
    let z = exp.correlator(None, limits)?;
    let mut lhs = Vec::with_capacity(f.n());
    for i in 1..=f.n() {
        let num = exp.correlator(Some(i), limits)?;
        lhs.push(series_div(&num, &z, order)?);
    }
    let rhs = formal_inverse(f, order).into_components();
    Ok(SeriesIdentity { order, lhs, rhs })
}
