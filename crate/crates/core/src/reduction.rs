//! The intermediate-field reduction: a system of degree `d` in `n` variables
//! becomes a system of degree `d - 1` in `n(n+1)` variables
//! `(phi_1..phi_n, sigma_11..sigma_nn)`.
//!
//! Rows of the reduced system:
//! - `phi_i`: the original couplings of order `< d`, plus the unit vertex
//!   `phi_j sigma_ij` for every `j`;
//! - `sigma_ij`: the order-`d` couplings of row `i` whose sorted index tuple
//!   starts with `j`, acting on the remaining `d - 1` indices.
//!
//! Assigning each sorted tuple to the slot `j = smallest index` is the fixed
//! de-symmetrization rule; it makes the map injective on symmetrized
//! couplings and leaves `sum_j phi_j sigma_ij = W_i^(d)` on the zero locus of
//! the sigma rows.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::inversion::{
    formal_inverse_with, is_j_param_with, is_jlin_param_with, partial_inverse_at_zero_with, polynomial_inverse_with,
    restricted_inverse_with, restricted_jacobian_det, Control, InverseKind, PartialSplit, RestrictedOutcome,
};
use crate::limits::Limits;
use crate::ring::{compose_many, Monomial, Poly, Rational};
use crate::system::PolySystem;

/// One-based coordinate of `sigma_{i,j}` in the reduced system.
pub fn sigma_index(n: usize, i: usize, j: usize) -> usize {
    n + (i - 1) * n + j
}

/// Inverse of [`sigma_index`]: `(i, j)` for a coordinate above `n`.
pub fn sigma_pair(n: usize, coord: usize) -> (usize, usize) {
    let off = coord - n - 1;
    (off / n + 1, off % n + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    original: PolySystem,
    reduced: PolySystem,
}

impl ReductionRecord {
    /// Rebuilds a record from a reduced system alone, checking that it lies in
    /// the image of [`phi`].
    pub fn from_reduced(n: usize, d: u32, reduced: PolySystem) -> Result<Self> {
        let original = phi_preimage(&reduced, n)
            .ok_or_else(|| Error::MalformedRecord("reduced system is not in the image of the reduction".into()))?;
        if original.d() != d {
            return Err(Error::MalformedRecord(format!(
                "record declares d = {d} but the reduced system implies d = {}",
                original.d()
            )));
        }
        Ok(ReductionRecord { original, reduced })
    }

    pub fn original(&self) -> &PolySystem {
        &self.original
    }

    pub fn reduced(&self) -> &PolySystem {
        &self.reduced
    }

    pub fn n(&self) -> usize {
        self.original.n()
    }

    pub fn d(&self) -> u32 {
        self.original.d()
    }

    /// Coordinate of the first sigma field minus one.
    pub fn sigma_base(&self) -> usize {
        self.n()
    }

    pub fn sigma_index(&self, i: usize, j: usize) -> usize {
        sigma_index(self.n(), i, j)
    }

    /// The parameters are the original coordinates.
    pub fn split(&self) -> PartialSplit {
        PartialSplit::new(self.n())
    }
}

/// The reduction map on systems of degree at least 3.
pub fn phi(f: &PolySystem) -> Result<ReductionRecord> {
    let d = f.d();
    if d < 3 {
        return Err(Error::InvalidDegree {
            found: d,
            reason: "reduction needs d >= 3; quadratic systems are terminal",
        });
    }
    let n = f.n();
    let mut reduced = PolySystem::identity(n * (n + 1), d - 1)?;
    for (slot, c) in f.couplings() {
        if slot.k < d {
            reduced.add_coupling(slot.row, slot.js.clone(), c.clone())?;
        } else {
            let j = slot.js[0];
            reduced.add_coupling(sigma_index(n, slot.row, j), slot.js[1..].to_vec(), c.clone())?;
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            reduced.add_coupling(i, vec![j, sigma_index(n, i, j)], Rational::one())?;
        }
    }
    Ok(ReductionRecord {
        original: f.clone(),
        reduced,
    })
}

/// Substitutes the zero locus of the sigma rows into the phi rows, giving
/// back a system in the original `n` variables.
pub fn eliminate_sigma(rec: &ReductionRecord) -> Result<PolySystem> {
    eliminate_sigma_from(rec.reduced(), rec.n(), rec.d())
}

/// [`eliminate_sigma`] on a bare reduced system of dimension `n(n+1)`.
pub fn eliminate_sigma_from(reduced: &PolySystem, n: usize, d: u32) -> Result<PolySystem> {
    let big = reduced.n();
    if big != n * (n + 1) {
        return Err(Error::MalformedRecord(format!(
            "reduced dimension {big} is not n(n+1) for n = {n}"
        )));
    }
    if reduced.d() + 1 != d {
        return Err(Error::MalformedRecord(format!(
            "reduced degree {} is not d - 1 for d = {d}",
            reduced.d()
        )));
    }
    let w = reduced.interactions();
    let mut subs = Poly::vars(n);
    for (s, row) in w.iter().enumerate().skip(n) {
        if (n + 1..=big).any(|v| row.mentions(v)) {
            return Err(Error::MalformedRecord(format!(
                "sigma row {} depends on sigma fields",
                s + 1
            )));
        }
        // sigma_s = W_s(phi) on the zero locus of F_s = sigma_s - W_s
        let value = Poly::from_terms(n, row.terms().map(|(m, c)| (m.clone(), c.clone())))?;
        subs.push(value);
    }
    let rows = reduced.to_polys();
    let polys = compose_many(&rows[..n], &subs, None)?;
    PolySystem::from_polys_with_degree(&polys, d).map_err(|e| Error::MalformedRecord(e.to_string()))
}

/// Reconstructs the unique `F` with `phi(F).reduced == ftilde`, if any.
pub fn phi_preimage(ftilde: &PolySystem, n: usize) -> Option<PolySystem> {
    if n == 0 || ftilde.n() != n * (n + 1) {
        return None;
    }
    let d = ftilde.d() + 1;
    for i in 1..=n {
        for j in 1..=n {
            if !ftilde.coupling(i, &[j, sigma_index(n, i, j)]).is_one() {
                return None;
            }
        }
    }
    let mut original = PolySystem::identity(n, d).ok()?;
    for (slot, c) in ftilde.couplings() {
        if slot.row <= n {
            let i = slot.row;
            if slot.k == 2 && slot.js[1] > n {
                // only the unit vertex phi_j sigma_ij may mix phi and sigma
                let j = slot.js[0];
                if slot.js[1] != sigma_index(n, i, j) {
                    return None;
                }
                continue;
            }
            if slot.js.iter().any(|&v| v > n) {
                return None;
            }
            original.add_coupling(i, slot.js.clone(), c.clone()).ok()?;
        } else {
            let (i, j) = sigma_pair(n, slot.row);
            if slot.k != d - 1 || slot.js.iter().any(|&v| v > n) || slot.js[0] < j {
                return None;
            }
            let mut js = Vec::with_capacity(d as usize);
            js.push(j);
            js.extend_from_slice(&slot.js);
            original.add_coupling(i, js, c.clone()).ok()?;
        }
    }
    match phi(&original) {
        Ok(rec) if rec.reduced == *ftilde => Some(original),
        _ => None,
    }
}

/// Applies [`phi`] until the degree reaches 2.
pub fn reduce_to_quadratic(f: &PolySystem) -> Result<Vec<ReductionRecord>> {
    reduce_to_quadratic_with(f, &Limits::default())
}

pub fn reduce_to_quadratic_with(f: &PolySystem, limits: &Limits) -> Result<Vec<ReductionRecord>> {
    if f.d() < 3 {
        return Err(Error::InvalidDegree {
            found: f.d(),
            reason: "reduction needs d >= 3; quadratic systems are terminal",
        });
    }
    let mut chain: Vec<ReductionRecord> = Vec::new();
    let mut current = f.clone();
    while current.d() >= 3 {
        let n = current.n();
        let next = n
            .checked_mul(n + 1)
            .ok_or_else(|| Error::limit("reduced dimension", u128::MAX, limits.max_vars as u128))?;
        if next > limits.max_vars {
            return Err(Error::limit("reduced dimension", next as u128, limits.max_vars as u128));
        }
        let rec = phi(&current)?;
        current = rec.reduced.clone();
        chain.push(rec);
    }
    Ok(chain)
}

/// `W_ij^(d)(phi) = sum over sorted tuples (j, tail) of w^(d)_{i,(j,tail)} phi_tail`,
/// read directly from the original couplings.
pub fn top_sigma_values(f: &PolySystem) -> Vec<Poly> {
    let n = f.n();
    let d = f.d();
    let mut out = vec![Poly::zero(n); n * n];
    for (slot, c) in f.couplings() {
        if slot.k == d {
            let j = slot.js[0];
            let idx = (slot.row - 1) * n + (j - 1);
            out[idx].add_term(Monomial::from_indices(&slot.js[1..]), c.clone());
        }
    }
    out
}

/// First mismatching component in a coefficient-wise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub component: usize,
    pub expected: Poly,
    pub found: Poly,
}

/// Instance-level comparison of a system with its reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub n: usize,
    pub d: u32,
    pub cutoff: u32,
    /// `det J_F`.
    pub det: Poly,
    /// `(det J_phi(F))(phi, sigma*(phi))`, `None` if the sigma solve failed.
    pub restricted_det: Option<Poly>,
    pub jlin: bool,
    pub jlin_param: bool,
    pub inverse_kind: InverseKind,
    pub restricted_outcome: RestrictedOutcome,
    /// Cutoff used for the restricted-inverse decision.
    pub restricted_cutoff: u32,
    pub transport_mismatch: Option<Mismatch>,
    pub sigma_mismatch: Option<Mismatch>,
}

impl TheoremReport {
    /// `is_jlin(F)` agrees with `is_jlin_param(phi(F), n' = n)`.
    pub fn jlin_agrees(&self) -> bool {
        self.jlin == self.jlin_param
    }

    /// Polynomial invertibility of `F` agrees with the restricted inverse of
    /// `phi(F)`; an inconclusive restricted result counts as agreement.
    pub fn inverse_agrees(&self) -> bool {
        matches!(
            (&self.inverse_kind, &self.restricted_outcome),
            (_, RestrictedOutcome::Inconclusive)
                | (InverseKind::Polynomial, RestrictedOutcome::True(_))
                | (InverseKind::FormalOnly, RestrictedOutcome::FalseAtCutoff)
        )
    }

    pub fn transport_agrees(&self) -> bool {
        self.transport_mismatch.is_none()
    }

    pub fn sigma_agrees(&self) -> bool {
        self.sigma_mismatch.is_none()
    }

    pub fn all_agree(&self) -> bool {
        self.jlin_agrees() && self.inverse_agrees() && self.transport_agrees() && self.sigma_agrees()
    }
}

pub fn verify_theorem(f: &PolySystem, cutoff: u32) -> Result<TheoremReport> {
    verify_theorem_with(f, cutoff, Control::new(&Limits::default()))
}

/// Runs the four checks (determinant transport, invertibility transport,
/// one-point transport to `cutoff`, sigma coordinates) concurrently.
///
/// The restricted-inverse decision uses `max(cutoff, (d-1) d^(n-1))`: when
/// `F` has a polynomial inverse of degree at most `d^(n-1)`, the restricted
/// inverse of the reduction has degree at most `(d-1) d^(n-1)`.
pub fn verify_theorem_with(f: &PolySystem, cutoff: u32, ctl: Control<'_>) -> Result<TheoremReport> {
    let rec = phi(f)?;
    let n = f.n();
    let d = f.d();
    let split = rec.split();
    let reduced = rec.reduced();

    let check_det = || -> Result<(Poly, Option<Poly>, bool, bool)> {
        let det = f.jacobian_det();
        let jlin = matches!(det.as_constant(), Some(c) if !c.is_zero());
        let restricted_det = match partial_inverse_at_zero_with(reduced, split, ctl) {
            Ok(z2) => Some(restricted_jacobian_det(reduced, split, &z2)?),
            Err(Error::NotPolynomial { .. }) => None,
            Err(e) => return Err(e),
        };
        let jlin_param = is_jlin_param_with(reduced, split, ctl)?;
        Ok((det, restricted_det, jlin, jlin_param))
    };

    let check_inverse = || -> Result<(InverseKind, RestrictedOutcome, u32)> {
        let bound = crate::inversion::degree_bound(f, ctl.limits)?;
        let kind = polynomial_inverse_with(f, None, ctl)?.kind();
        let restricted_cutoff = cutoff.max((d - 1).saturating_mul(bound));
        let outcome = is_j_param_with(reduced, split, restricted_cutoff, ctl)?;
        Ok((kind, outcome, restricted_cutoff))
    };

    let check_series = || -> Result<(Option<Mismatch>, Option<Mismatch>)> {
        let direct = formal_inverse_with(f, cutoff, ctl)?;
        let restricted = restricted_inverse_with(reduced, n, cutoff, ctl)?;
        let comps = restricted.components();
        let transport = first_mismatch(direct.components(), &comps[..n], 0);
        let sigma_expected: Vec<Poly> = compose_many(&top_sigma_values(f), &comps[..n], Some(cutoff))?;
        let sigma = first_mismatch(&sigma_expected, &comps[n..], n);
        Ok((transport, sigma))
    };

    let ((det_part, inv_part), series_part) = rayon::join(|| rayon::join(check_det, check_inverse), check_series);
    let (det, restricted_det, jlin, jlin_param) = det_part?;
    let (inverse_kind, restricted_outcome, restricted_cutoff) = inv_part?;
    let (transport_mismatch, sigma_mismatch) = series_part?;

    Ok(TheoremReport {
        n,
        d,
        cutoff,
        det,
        restricted_det,
        jlin,
        jlin_param,
        inverse_kind,
        restricted_outcome,
        restricted_cutoff,
        transport_mismatch,
        sigma_mismatch,
    })
}

fn first_mismatch(expected: &[Poly], found: &[Poly], offset: usize) -> Option<Mismatch> {
    expected
        .iter()
        .zip(found)
        .enumerate()
        .find(|(_, (e, f))| e != f)
        .map(|(k, (e, f))| Mismatch {
            component: offset + k + 1,
            expected: e.clone(),
            found: f.clone(),
        })
}
