//! Formal and polynomial inversion of identity-linear systems, and the
//! parametrized membership tests built on the partial inverse `R^{-1}(0, z1)`.
//!
//! Every inverse here is the fixed point of `G = u + W(G)`, found by Picard
//! iteration graded by total degree: after the step truncated at degree `m`
//! the iterate is exact through degree `m`, because `W` has no terms below
//! degree 2.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::limits::{Limits, Progress, Silent, Step};
use crate::ring::{compose_many, Poly, SeriesVec};
use crate::system::PolySystem;

static SILENT: Silent = Silent;

/// Resource limits plus a progress/cancellation hook.
#[derive(Clone, Copy)]
pub struct Control<'a> {
    pub limits: &'a Limits,
    pub progress: &'a dyn Progress,
}

impl<'a> Control<'a> {
    pub fn new(limits: &'a Limits) -> Self {
        Control {
            limits,
            progress: &SILENT,
        }
    }

    pub fn with_progress(limits: &'a Limits, progress: &'a dyn Progress) -> Self {
        Control { limits, progress }
    }
}

/// The split `C^n = C^{n'} x C^{n-n'}`: the first `nprime` coordinates are the
/// parameters `z1`, the rest are the unknowns `z2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialSplit {
    pub nprime: usize,
}

impl PartialSplit {
    pub fn new(nprime: usize) -> Self {
        PartialSplit { nprime }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.nprime > n {
            return Err(Error::InvalidSplit { nprime: self.nprime, n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseKind {
    Polynomial,
    FormalOnly,
}

/// Outcome of [`polynomial_inverse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InverseReport {
    /// Exact inverse; `F(G) = G(F) = id` was checked by composition.
    Polynomial(Vec<Poly>),
    /// No polynomial inverse of degree at most `cutoff`; the formal inverse
    /// to that order is attached.
    FormalOnly { series: SeriesVec, cutoff: u32 },
}

impl InverseReport {
    pub fn kind(&self) -> InverseKind {
        match self {
            InverseReport::Polynomial(_) => InverseKind::Polynomial,
            InverseReport::FormalOnly { .. } => InverseKind::FormalOnly,
        }
    }

    pub fn verified(&self) -> bool {
        matches!(self, InverseReport::Polynomial(_))
    }

    pub fn polynomial(&self) -> Option<&[Poly]> {
        match self {
            InverseReport::Polynomial(g) => Some(g),
            InverseReport::FormalOnly { .. } => None,
        }
    }
}

/// Three-valued outcome of [`is_j_param`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedOutcome {
    /// The restricted inverse is this polynomial map and `F(P(u1)) = (u1, 0)`.
    True(Vec<Poly>),
    /// The restricted series has a nonzero term above the cutoff, so no
    /// polynomial of degree `<= cutoff` can be the restriction.
    FalseAtCutoff,
    /// The series looked stable at the cutoff but the exact check failed.
    Inconclusive,
}

impl RestrictedOutcome {
    pub fn is_true(&self) -> bool {
        matches!(self, RestrictedOutcome::True(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RestrictedOutcome::True(_) => "true",
            RestrictedOutcome::FalseAtCutoff => "false-at-cutoff",
            RestrictedOutcome::Inconclusive => "inconclusive",
        }
    }
}

/// Fixed-point problem `x = base + W_rows(subst(x))`.
struct FixedPoint {
    rows: Vec<Poly>,
    unknowns: Vec<usize>,
    fixed: Vec<Option<Poly>>,
    base: Vec<Poly>,
    out_vars: usize,
}

enum Search {
    Found(Vec<Poly>),
    Exhausted { series: Vec<Poly>, top_zero: bool },
}

impl FixedPoint {
    /// `G = (u1, 0) + W(G)` with sources on the first `nsrc` coordinates.
    fn inverse(f: &PolySystem, nsrc: usize) -> Self {
        let n = f.n();
        FixedPoint {
            rows: f.interactions(),
            unknowns: (0..n).collect(),
            fixed: vec![None; n],
            base: (0..n)
                .map(|i| {
                    if i < nsrc {
                        Poly::var(nsrc, i + 1)
                    } else {
                        Poly::zero(nsrc)
                    }
                })
                .collect(),
            out_vars: nsrc,
        }
    }

    /// `z2 = W_2(z1, z2)`, the zero locus of the last `n - n'` components.
    fn partial(f: &PolySystem, nprime: usize) -> Self {
        let n = f.n();
        let w = f.interactions();
        FixedPoint {
            rows: w[nprime..].to_vec(),
            unknowns: (nprime..n).collect(),
            fixed: (0..n).map(|i| (i < nprime).then(|| Poly::var(nprime, i + 1))).collect(),
            base: vec![Poly::zero(nprime); n - nprime],
            out_vars: nprime,
        }
    }

    fn substitution(&self, current: &[Poly]) -> Vec<Poly> {
        let mut subs: Vec<Poly> = self
            .fixed
            .iter()
            .map(|f| f.clone().unwrap_or_else(|| Poly::zero(self.out_vars)))
            .collect();
        for (slot, value) in self.unknowns.iter().zip(current) {
            subs[*slot] = value.clone();
        }
        subs
    }

    fn step(&self, current: &[Poly], order: Option<u32>) -> Result<Vec<Poly>> {
        let subs = self.substitution(current);
        let images = compose_many(&self.rows, &subs, order)?;
        Ok(self.base.iter().zip(images).map(|(b, w)| b + &w).collect())
    }

    fn run(&self, max_order: u32, search: bool, ctl: Control<'_>) -> Result<Search> {
        let mut current = self.base.clone();
        for m in 1..=max_order {
            current = self.step(&current, Some(m))?;
            let terms: usize = current.iter().map(Poly::num_terms).sum();
            if terms > ctl.limits.max_terms {
                return Err(Error::limit(
                    "series terms",
                    terms as u128,
                    ctl.limits.max_terms as u128,
                ));
            }
            if let ControlFlow::Break(()) = ctl.progress.step(Step { degree: m, terms }) {
                return Err(Error::Cancelled { degree: m });
            }
            if search && current.iter().all(|p| p.homogeneous(m).is_zero()) {
                // degree-m part vanished: test whether the iterate is an exact fixed point
                if self.step(&current, None)? == current {
                    return Ok(Search::Found(current));
                }
            }
        }
        let top_zero = current.iter().all(|p| p.homogeneous(max_order).is_zero());
        Ok(Search::Exhausted {
            series: current,
            top_zero,
        })
    }
}

/// Formal inverse `G` with `F(G(u)) = u` through total degree `order`.
pub fn formal_inverse(f: &PolySystem, order: u32) -> SeriesVec {
    formal_inverse_with(f, order, Control::new(&Limits::default()))
        .expect("default limits are generous enough for formal inversion")
}

pub fn formal_inverse_with(f: &PolySystem, order: u32, ctl: Control<'_>) -> Result<SeriesVec> {
    restricted_inverse_with(f, f.n(), order, ctl)
}

/// Formal inverse evaluated at `u = (u1, 0)` with `u1` the first `nsrc`
/// sources. Components are series in `nsrc` variables.
pub fn restricted_inverse(f: &PolySystem, nsrc: usize, order: u32) -> Result<SeriesVec> {
    restricted_inverse_with(f, nsrc, order, Control::new(&Limits::default()))
}

pub fn restricted_inverse_with(f: &PolySystem, nsrc: usize, order: u32, ctl: Control<'_>) -> Result<SeriesVec> {
    PartialSplit::new(nsrc).check(f.n())?;
    match FixedPoint::inverse(f, nsrc).run(order, false, ctl)? {
        Search::Exhausted { series, .. } => Ok(SeriesVec::new(series, order)),
        Search::Found(_) => unreachable!("search disabled"),
    }
}

/// The classical inverse-degree bound `d^(n-1)`, guarded by the limits.
pub fn degree_bound(f: &PolySystem, limits: &Limits) -> Result<u32> {
    let exp = f.n().saturating_sub(1) as u32;
    let bound = (f.d() as u64).checked_pow(exp);
    match bound {
        Some(b) if b <= limits.max_inverse_degree && b < u32::MAX as u64 => Ok(b as u32),
        Some(b) => Err(Error::limit(
            "inverse degree bound d^(n-1)",
            b,
            limits.max_inverse_degree,
        )),
        None => Err(Error::limit(
            "inverse degree bound d^(n-1)",
            u128::MAX,
            limits.max_inverse_degree,
        )),
    }
}

/// Decides whether `F` has a polynomial inverse, searching up to the degree
/// bound `d^(n-1)`.
pub fn polynomial_inverse(f: &PolySystem) -> Result<InverseReport> {
    polynomial_inverse_with(f, None, Control::new(&Limits::default()))
}

/// Like [`polynomial_inverse`]; `cutoff` overrides the degree bound.
pub fn polynomial_inverse_with(f: &PolySystem, cutoff: Option<u32>, ctl: Control<'_>) -> Result<InverseReport> {
    let cutoff = match cutoff {
        Some(c) => c,
        None => degree_bound(f, ctl.limits)?,
    };
    let n = f.n();
    match FixedPoint::inverse(f, n).run(cutoff + 1, true, ctl)? {
        Search::Found(g) => {
            if composes_to_identity(f, &g)? {
                Ok(InverseReport::Polynomial(g))
            } else {
                Ok(InverseReport::FormalOnly {
                    series: SeriesVec::new(g, cutoff),
                    cutoff,
                })
            }
        }
        Search::Exhausted { series, .. } => Ok(InverseReport::FormalOnly {
            series: SeriesVec::new(series, cutoff),
            cutoff,
        }),
    }
}

/// Exact check `F(G) = id` and `G(F) = id`.
pub fn composes_to_identity(f: &PolySystem, g: &[Poly]) -> Result<bool> {
    let n = f.n();
    let id = Poly::vars(n);
    let fp = f.to_polys();
    if compose_many(&fp, g, None)? != id {
        return Ok(false);
    }
    Ok(compose_many(g, &fp, None)? == id)
}

/// The polynomial solution `z2*(z1)` of `F_2(z1, z2) = 0`, i.e. `R^{-1}(0, z1)`.
///
/// Fails with [`Error::NotPolynomial`] if no polynomial solution of degree at
/// most `limits.partial_cutoff` exists.
pub fn partial_inverse_at_zero(f: &PolySystem, split: PartialSplit) -> Result<Vec<Poly>> {
    partial_inverse_at_zero_with(f, split, Control::new(&Limits::default()))
}

pub fn partial_inverse_at_zero_with(f: &PolySystem, split: PartialSplit, ctl: Control<'_>) -> Result<Vec<Poly>> {
    split.check(f.n())?;
    let nprime = split.nprime;
    if nprime == f.n() {
        return Ok(Vec::new());
    }
    let cutoff = ctl.limits.partial_cutoff;
    let problem = FixedPoint::partial(f, nprime);
    match problem.run(cutoff + 1, true, ctl)? {
        Search::Found(z2) => {
            // R(z2*; z1) = 0 checked on the original coordinates
            let subs = problem.substitution(&z2);
            let residual = compose_many(&f.to_polys()[nprime..], &subs, None)?;
            if residual.iter().all(Poly::is_zero) {
                Ok(z2)
            } else {
                Err(Error::NotPolynomial { cutoff })
            }
        }
        Search::Exhausted { .. } => Err(Error::NotPolynomial { cutoff }),
    }
}

/// Whether `(det J_F)(z1, R^{-1}(0, z1))` is a nonzero constant.
pub fn is_jlin_param(f: &PolySystem, split: PartialSplit) -> Result<bool> {
    is_jlin_param_with(f, split, Control::new(&Limits::default()))
}

pub fn is_jlin_param_with(f: &PolySystem, split: PartialSplit, ctl: Control<'_>) -> Result<bool> {
    let z2 = match partial_inverse_at_zero_with(f, split, ctl) {
        Ok(z2) => z2,
        Err(Error::NotPolynomial { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(matches!(restricted_jacobian_det(f, split, &z2)?.as_constant(), Some(c) if c != num_traits::Zero::zero()))
}

/// `(det J_F)(z1, z2*)`. The substitution is applied to the matrix entries
/// before expanding, which agrees with substituting into the determinant.
pub fn restricted_jacobian_det(f: &PolySystem, split: PartialSplit, z2: &[Poly]) -> Result<Poly> {
    let nprime = split.nprime;
    let mut subs = Poly::vars(nprime);
    subs.extend_from_slice(z2);
    if subs.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: subs.len(),
        });
    }
    let m = f.jacobian_matrix().substitute(&subs)?;
    Ok(crate::det::determinant(&m, nprime))
}

/// Whether the formal inverse restricted to `u = (u1, 0)` is a polynomial map
/// `P(u1)` of degree at most `cutoff` with `F(P(u1)) = (u1, 0)`.
pub fn is_j_param(f: &PolySystem, split: PartialSplit, cutoff: u32) -> Result<RestrictedOutcome> {
    is_j_param_with(f, split, cutoff, Control::new(&Limits::default()))
}

pub fn is_j_param_with(
    f: &PolySystem,
    split: PartialSplit,
    cutoff: u32,
    ctl: Control<'_>,
) -> Result<RestrictedOutcome> {
    split.check(f.n())?;
    let nprime = split.nprime;
    match FixedPoint::inverse(f, nprime).run(cutoff + 1, true, ctl)? {
        Search::Found(p) => {
            let image = compose_many(&f.to_polys(), &p, None)?;
            let target: Vec<Poly> = (0..f.n())
                .map(|i| {
                    if i < nprime {
                        Poly::var(nprime, i + 1)
                    } else {
                        Poly::zero(nprime)
                    }
                })
                .collect();
            if image == target {
                Ok(RestrictedOutcome::True(p))
            } else {
                Ok(RestrictedOutcome::Inconclusive)
            }
        }
        Search::Exhausted { top_zero: true, .. } => Ok(RestrictedOutcome::Inconclusive),
        Search::Exhausted { top_zero: false, .. } => Ok(RestrictedOutcome::FalseAtCutoff),
    }
}
