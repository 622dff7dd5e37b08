//! Cross-checks against algorithms that share no code path with the library's
//! own: Newton iteration for series inversion, brute-force pairings for
//! Gaussian moments, and values computed offline by undetermined coefficients.

mod common;

use proptest::prelude::*;

use common::system;
use jacobian_core::inversion::formal_inverse;
use jacobian_core::ring::{int, ratio, series_recip, Monomial};
use jacobian_core::wick::{
    complex_gaussian_moment, one_point_identity, real_gaussian_moment, z_det_identity, z_series, MomentSpec,
};
use jacobian_core::{Limits, Poly, PolySystem, Rational};

/// Newton iteration `G <- G - DF(G)^{-1} (F(G) - u)` for `n = 2`, with the
/// 2x2 inverse written out by the adjugate. Precision doubles per step.
fn newton_inverse(f: &PolySystem, order: u32) -> Vec<Poly> {
    assert_eq!(f.n(), 2);
    let polys = f.to_polys();
    let m = f.jacobian_matrix();
    let u = Poly::vars(2);
    let mut g = u.clone();
    let mut prec = 1;
    while prec < order {
        prec = (2 * prec).min(order);
        let fg: Vec<Poly> = polys.iter().map(|p| p.compose_truncated(&g, prec).unwrap()).collect();
        let residual: Vec<Poly> = fg.iter().zip(&u).map(|(a, b)| a - b).collect();
        // D[j][k] = dF_j/dz_k = entry(k, j)
        let d = |j: usize, k: usize| m.entry(k, j).compose_truncated(&g, prec).unwrap();
        let (a, b, c, e) = (d(1, 1), d(1, 2), d(2, 1), d(2, 2));
        let det = &a.mul_truncated(&e, prec) - &b.mul_truncated(&c, prec);
        let inv_det = series_recip(&det, prec).unwrap();
        let r1 = &residual[0];
        let r2 = &residual[1];
        let delta1 = (&e.mul_truncated(r1, prec) - &b.mul_truncated(r2, prec)).mul_truncated(&inv_det, prec);
        let delta2 = (&a.mul_truncated(r2, prec) - &c.mul_truncated(r1, prec)).mul_truncated(&inv_det, prec);
        g = vec![(&g[0] - &delta1).truncate(prec), (&g[1] - &delta2).truncate(prec)];
    }
    g
}

fn mono(pairs: &[(u32, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().copied())
}

fn poly2(terms: &[(&[(u32, u32)], Rational)]) -> Poly {
    Poly::from_terms(2, terms.iter().map(|(m, c)| (mono(m), c.clone()))).unwrap()
}

fn negative_example() -> PolySystem {
    PolySystem::from_couplings(2, 2, [(1, vec![2, 2], int(1)), (2, vec![1, 1], int(1))]).unwrap()
}

/// Enumerates every bijection between the `phi` and `phibar` slots.
fn permanent_by_pairings(phis: &[usize], bars: &[usize]) -> u64 {
    if phis.len() != bars.len() {
        return 0;
    }
    fn go(phis: &[usize], bars: &mut Vec<usize>) -> u64 {
        let Some((&first, rest)) = phis.split_first() else {
            return 1;
        };
        let mut total = 0;
        for k in 0..bars.len() {
            if bars[k] == first {
                let taken = bars.remove(k);
                total += go(rest, bars);
                bars.insert(k, taken);
            }
        }
        total
    }
    go(phis, &mut bars.to_vec())
}

#[test]
fn negative_example_inverse_by_undetermined_coefficients() {
    // computed offline by solving F(G(u)) = u for the coefficients of G
    let g = formal_inverse(&negative_example(), 5);
    let g1 = poly2(&[
        (&[(1, 1)], int(1)),
        (&[(2, 2)], int(1)),
        (&[(1, 2), (2, 1)], int(2)),
        (&[(1, 4)], int(1)),
        (&[(1, 1), (2, 3)], int(4)),
    ]);
    assert_eq!(g.components()[0].truncate(4), g1.truncate(4));
    assert_eq!(g.components()[0], newton_inverse(&negative_example(), 5)[0]);
}

#[test]
fn worked_example_inverse_terminates() {
    let f = PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(-1))]).unwrap();
    let expected = vec![poly2(&[(&[(1, 1)], int(1)), (&[(2, 3)], int(-1))]), Poly::var(2, 2)];
    for order in [3, 6, 12] {
        assert_eq!(formal_inverse(&f, order).components(), expected.as_slice());
    }
}

#[test]
fn negative_example_partition_function() {
    let z = z_series(&negative_example(), 4).unwrap().series;
    let expected = poly2(&[
        (&[], int(1)),
        (&[(1, 1), (2, 1)], int(4)),
        (&[(1, 3)], int(4)),
        (&[(2, 3)], int(4)),
        (&[(1, 2), (2, 2)], int(36)),
    ]);
    assert_eq!(z, expected);
}

#[test]
fn gaussian_moments_by_integration_by_parts() {
    // E[x^(2k)] = (2k - 1) E[x^(2k - 2)]
    let mut expected = int(1);
    for k in 0..=10u32 {
        if k > 0 {
            expected *= int(2 * k as i64 - 1);
        }
        assert_eq!(real_gaussian_moment(k), expected, "k = {k}");
    }
}

#[test]
fn complex_moment_examples() {
    assert_eq!(
        complex_gaussian_moment(&MomentSpec::new(vec![1, 1], vec![1, 1])),
        int(2)
    );
    assert_eq!(
        complex_gaussian_moment(&MomentSpec::new(vec![1, 2], vec![1, 2])),
        int(1)
    );
    assert_eq!(complex_gaussian_moment(&MomentSpec::new(vec![1], vec![2])), int(0));
    assert_eq!(
        complex_gaussian_moment(&MomentSpec::new(vec![1, 1, 1], vec![1, 1])),
        int(0)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn formal_inverse_matches_newton(f in system(2, 3, 6), order in 1u32..9) {
        let g = formal_inverse(&f, order);
        let newton = newton_inverse(&f, order);
        prop_assert_eq!(g.components(), newton.as_slice());
    }

    #[test]
    fn complex_moment_is_a_permanent(
        phis in prop::collection::vec(1usize..=3, 0..6), bars in prop::collection::vec(1usize..=3, 0..6)
    ) {
        let spec = MomentSpec::new(phis.clone(), bars.clone());
        let expected = permanent_by_pairings(&phis, &bars);
        prop_assert_eq!(complex_gaussian_moment(&spec), Rational::from_integer(expected.into()));
    }

    #[test]
    fn wick_expansion_matches_inversion(f in system(2, 3, 4)) {
        let limits = Limits::default();
        prop_assert!(z_det_identity(&f, 3, &limits).unwrap().matched());
        prop_assert!(one_point_identity(&f, 3, &limits).unwrap().matched());
    }

    #[test]
    fn partition_function_is_one_for_constant_det(seed: u64) {
        let tame = jacobian_core::generators::random_tame(2, 2, 3, seed).unwrap();
        prop_assert_eq!(z_series(&tame.system, 4).unwrap().series, Poly::one(2));
    }
}

#[test]
fn non_integer_couplings() {
    let f = PolySystem::from_couplings(2, 3, [(1, vec![1, 2], ratio(1, 2)), (2, vec![1, 1, 2], ratio(-3, 2))]).unwrap();
    assert_eq!(formal_inverse(&f, 7).components(), newton_inverse(&f, 7).as_slice());
    assert!(z_det_identity(&f, 4, &Limits::default()).unwrap().matched());
}
