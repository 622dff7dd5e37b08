//! Seeded corpora: tame automorphisms with known inverses, generic random
//! systems, and the elementary transvections they are built from.
//!
//! Every generator draws from a ChaCha8 stream keyed by `(seed, stream)`, so
//! corpus entry `k` can be produced independently of entries `0..k`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::{ratio, Monomial, Poly, Rational};
use crate::system::PolySystem;

const MAX_ATTEMPTS_PER_STEP: usize = 64;

/// The generator for corpus entry `stream` under a base `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Numerator in `[-3, 3] \ {0}`, denominator in `{1, 2}`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let num = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("non-empty");
    let den = *[1i64, 2].choose(rng).expect("non-empty");
    ratio(num, den)
}

/// `z_target -> z_target + shift`, with `shift` free of `z_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transvection {
    target: usize,
    shift: Poly,
}

impl Transvection {
    pub fn new(target: usize, shift: Poly) -> Result<Self> {
        let n = shift.nvars();
        if target == 0 || target > n {
            return Err(Error::IndexOutOfRange {
                index: target,
                nvars: n,
            });
        }
        if shift.mentions(target) {
            return Err(Error::InvalidParameter(format!("shift mentions its target z{target}")));
        }
        if shift.min_degree().is_some_and(|m| m < 2) {
            return Err(Error::InvalidParameter(
                "shift must only contain terms of degree >= 2".into(),
            ));
        }
        Ok(Transvection { target, shift })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn shift(&self) -> &Poly {
        &self.shift
    }

    /// The transvection with the negated shift.
    pub fn inverse(&self) -> Transvection {
        Transvection {
            target: self.target,
            shift: -&self.shift,
        }
    }
}

/// `F_target = z_target + shift`, identity elsewhere.
pub fn elementary_system(n: usize, t: &Transvection) -> Result<PolySystem> {
    if t.shift.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.shift.nvars(),
        });
    }
    let mut polys = Poly::vars(n);
    polys[t.target - 1] = &polys[t.target - 1] + &t.shift;
    PolySystem::from_polys(&polys)
}

fn random_transvection<R: Rng + ?Sized>(rng: &mut R, n: usize, maxdeg: u32) -> Transvection {
    let target = rng.gen_range(1..=n);
    let others: Vec<u32> = (1..=n as u32).filter(|&v| v as usize != target).collect();
    let nterms = rng.gen_range(1..=2);
    let mut shift = Poly::zero(n);
    for _ in 0..nterms {
        let deg = rng.gen_range(2..=maxdeg);
        let mono = Monomial::from_pairs((0..deg).map(|_| (*others.choose(rng).expect("n >= 2"), 1)));
        shift.add_term(mono, small_rational(rng));
    }
    Transvection { target, shift }
}

/// A composition of random transvections together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameSystem {
    pub system: PolySystem,
    /// Inverse obtained by composing the negated transvections in reverse.
    pub known_inverse: PolySystem,
    /// The accepted transvections, first applied first.
    pub steps: Vec<Transvection>,
}

/// Composes `steps` random transvections in `n >= 2` variables, rejecting any
/// step that would push the composite degree above `maxdeg`. A step that
/// cannot be placed within a bounded number of attempts is skipped.
pub fn random_tame(n: usize, steps: usize, maxdeg: u32, seed: u64) -> Result<TameSystem> {
    random_tame_from(&mut rng_for(seed, 0), n, steps, maxdeg)
}

pub fn random_tame_from<R: Rng + ?Sized>(rng: &mut R, n: usize, steps: usize, maxdeg: u32) -> Result<TameSystem> {
    if n < 2 {
        return Err(Error::InvalidParameter("tame generation needs n >= 2".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if maxdeg < 2 {
        return Err(Error::InvalidParameter("maxdeg must be at least 2".into()));
    }
    let mut system = PolySystem::identity(n, 2)?;
    let mut known_inverse = PolySystem::identity(n, 2)?;
    let mut accepted = Vec::with_capacity(steps);
    for _ in 0..steps {
        for _ in 0..MAX_ATTEMPTS_PER_STEP {
            let t = random_transvection(rng, n, maxdeg);
            if t.shift.is_zero() {
                continue;
            }
            let candidate = elementary_system(n, &t)?.compose(&system)?;
            if candidate.effective_degree() > maxdeg {
                continue;
            }
            known_inverse = known_inverse.compose(&elementary_system(n, &t.inverse())?)?;
            system = candidate;
            accepted.push(t);
            break;
        }
    }
    Ok(TameSystem {
        system,
        known_inverse,
        steps: accepted,
    })
}

/// Each sorted coupling slot of order `2..=d` is filled with a small random
/// rational with probability `density`.
pub fn random_system(n: usize, d: u32, density: f64, seed: u64) -> Result<PolySystem> {
    random_system_from(&mut rng_for(seed, 0), n, d, density)
}

pub fn random_system_from<R: Rng + ?Sized>(rng: &mut R, n: usize, d: u32, density: f64) -> Result<PolySystem> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(format!("density {density} outside (0, 1]")));
    }
    let mut sys = PolySystem::identity(n, d)?;
    for k in 2..=d {
        for i in 1..=n {
            for js in sorted_tuples(n, k as usize) {
                if rng.gen_bool(density) {
                    sys.add_coupling(i, js, small_rational(rng))?;
                }
            }
        }
    }
    Ok(sys)
}

/// All non-decreasing tuples of length `k` over `1..=n`.
pub fn sorted_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..=n {
            cur.push(j);
            go(n, k, j, cur, out);
            cur.pop();
        }
    }
    go(n, k, 1, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inversion::{polynomial_inverse, InverseKind};
    use crate::ring::int;

    #[test]
    fn elementary_worked_example() {
        let shift = Poly::var(2, 2).pow(3);
        let t = Transvection::new(1, shift).unwrap();
        let f = elementary_system(2, &t).unwrap();
        assert_eq!(
            f,
            PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(-1))]).unwrap()
        );
    }

    #[test]
    fn transvection_validation() {
        assert!(Transvection::new(1, Poly::var(2, 1).pow(2)).is_err());
        assert!(Transvection::new(1, Poly::var(2, 2)).is_err());
        assert!(Transvection::new(3, Poly::var(2, 2).pow(2)).is_err());
        assert!(Transvection::new(1, Poly::zero(2)).is_ok());
    }

    #[test]
    fn elementary_det_is_one() {
        let shift = &Poly::var(3, 1) * &Poly::var(3, 3);
        let f = elementary_system(3, &Transvection::new(2, shift).unwrap()).unwrap();
        assert_eq!(f.jacobian_det(), Poly::one(3));
    }

    #[test]
    fn single_step_is_elementary() {
        let tame = random_tame(3, 1, 4, 11).unwrap();
        assert_eq!(tame.steps.len(), 1);
        assert_eq!(tame.system, elementary_system(3, &tame.steps[0]).unwrap());
        assert_eq!(
            tame.known_inverse,
            elementary_system(3, &tame.steps[0].inverse()).unwrap()
        );
    }

    #[test]
    fn tame_is_invertible_with_known_inverse() {
        for seed in 0..8 {
            let tame = random_tame(3, 3, 4, seed).unwrap();
            assert!(tame.system.effective_degree() <= 4);
            assert!(tame.system.is_jlin());
            assert!(tame.system.compose(&tame.known_inverse).unwrap().is_identity());
            let report = polynomial_inverse(&tame.system).unwrap();
            assert_eq!(report.kind(), InverseKind::Polynomial);
            assert_eq!(report.polynomial().unwrap(), tame.known_inverse.to_polys().as_slice());
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(random_tame(3, 3, 5, 42).unwrap(), random_tame(3, 3, 5, 42).unwrap());
        assert_eq!(
            random_system(3, 4, 0.3, 7).unwrap(),
            random_system(3, 4, 0.3, 7).unwrap()
        );
        assert_ne!(
            random_system(3, 4, 0.3, 7).unwrap(),
            random_system(3, 4, 0.3, 8).unwrap()
        );
        let a: u64 = rng_for(5, 1).gen();
        let b: u64 = rng_for(5, 2).gen();
        assert_ne!(a, b);
    }

    #[test]
    fn density_bounds() {
        assert!(random_system(2, 3, 0.0, 1).is_err());
        assert!(random_system(2, 3, 1.5, 1).is_err());
        let tiny = random_system(2, 3, 1e-12, 1).unwrap();
        assert!(tiny.is_identity());
        let full = random_system(2, 3, 1.0, 1).unwrap();
        // 2 rows x (3 quadratic + 4 cubic) slots
        assert_eq!(full.num_couplings(), 14);
    }

    #[test]
    fn random_systems_are_mostly_not_jlin() {
        let negatives = (0..20)
            .filter(|&s| !random_system(2, 3, 0.5, s).unwrap().is_jlin())
            .count();
        assert!(negatives >= 15, "only {negatives} of 20 had nonconstant det");
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(sorted_tuples(2, 2), vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        assert_eq!(sorted_tuples(3, 3).len(), 10);
    }
}
