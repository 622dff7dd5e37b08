mod common;

use proptest::prelude::*;

use common::{system, system_of_degree};
use jacobian_core::generators::{random_system, random_tame};
use jacobian_core::inversion::{
    formal_inverse, is_j_param, is_jlin_param, partial_inverse_at_zero, polynomial_inverse, restricted_inverse,
    restricted_jacobian_det, PartialSplit,
};
use jacobian_core::json::{record_from_json, record_to_json, system_to_json, tame_entry, to_canonical_string};
use jacobian_core::reduction::{eliminate_sigma, phi, phi_preimage, top_sigma_values};
use jacobian_core::ring::compose_many;
use jacobian_core::{Poly, PolySystem};

/// `F(G) = id` and `G(F) = id` through degree `order`.
fn is_truncated_inverse(f: &PolySystem, g: &[Poly], order: u32) -> bool {
    let id = Poly::vars(f.n());
    let fg = compose_many(&f.to_polys(), g, Some(order)).unwrap();
    let gf = compose_many(g, &f.to_polys(), Some(order)).unwrap();
    fg == id && gf == id
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn formal_inverse_is_a_two_sided_truncated_inverse(f in system(3, 3, 6), order in 1u32..7) {
        let g = formal_inverse(&f, order);
        prop_assert!(is_truncated_inverse(&f, g.components(), order));
        for (i, gi) in g.components().iter().enumerate() {
            prop_assert_eq!(gi.homogeneous(1), Poly::var(3, i + 1));
            prop_assert!(gi.constant_term() == Poly::zero(3).constant_term());
        }
    }

    #[test]
    fn formal_inverse_is_compatible_with_truncation(f in system(2, 3, 5), order in 2u32..8) {
        let high = formal_inverse(&f, order);
        let low = formal_inverse(&f, order - 1);
        prop_assert_eq!(high.truncate(order - 1), low);
    }

    #[test]
    fn reduction_round_trip(f in system(3, 4, 8), d in 3u32..=5) {
        let f = f.with_degree(d.max(f.d())).unwrap();
        let rec = phi(&f).unwrap();
        prop_assert_eq!(rec.reduced().n(), 12);
        prop_assert_eq!(rec.reduced().d(), f.d() - 1);
        prop_assert_eq!(eliminate_sigma(&rec).unwrap(), f.clone());
        prop_assert_eq!(phi_preimage(rec.reduced(), 3), Some(f));
        let v = record_to_json(&rec);
        prop_assert_eq!(record_from_json(&v).unwrap(), rec);
    }

    #[test]
    fn sigma_solution_and_restricted_det(f in system_of_degree(2, 3, 5)) {
        let rec = phi(&f).unwrap();
        let split = rec.split();
        let sigma = partial_inverse_at_zero(rec.reduced(), split).unwrap();
        prop_assert_eq!(&sigma, &top_sigma_values(&f));
        let det = restricted_jacobian_det(rec.reduced(), split, &sigma).unwrap();
        prop_assert_eq!(det, f.jacobian_det());
        prop_assert_eq!(is_jlin_param(rec.reduced(), split).unwrap(), f.is_jlin());
    }

    #[test]
    fn restricted_inverse_transports(f in system_of_degree(2, 4, 5), order in 1u32..8) {
        let rec = phi(&f).unwrap();
        let direct = formal_inverse(&f, order);
        let restricted = restricted_inverse(rec.reduced(), 2, order).unwrap();
        prop_assert_eq!(direct.components(), &restricted.components()[..2]);
        let sigma = compose_many(&top_sigma_values(&f), direct.components(), Some(order)).unwrap();
        prop_assert_eq!(&sigma[..], &restricted.components()[2..]);
    }

    #[test]
    fn full_split_restricted_inverse_is_formal_inverse(f in system(2, 3, 5), order in 1u32..7) {
        prop_assert_eq!(restricted_inverse(&f, 2, order).unwrap(), formal_inverse(&f, order));
    }

    #[test]
    fn parametrized_predicates_at_full_split(f in system(2, 3, 5)) {
        let full = PartialSplit::new(2);
        prop_assert_eq!(is_jlin_param(&f, full).unwrap(), f.is_jlin());
        let direct = polynomial_inverse(&f).unwrap();
        let restricted = is_j_param(&f, full, 9).unwrap();
        prop_assert_eq!(direct.verified(), restricted.is_true());
    }

    #[test]
    fn tame_inverse_matches_known_inverse(n in 2usize..=3, steps in 1usize..=3, maxdeg in 2u32..=4, seed: u64) {
        let tame = random_tame(n, steps, maxdeg, seed).unwrap();
        let report = polynomial_inverse(&tame.system).unwrap();
        let g = report.polynomial().expect("tame systems are invertible");
        let known = tame.known_inverse.to_polys();
        prop_assert_eq!(g, known.as_slice());
        prop_assert!(tame.system.is_jlin());
    }

    #[test]
    fn tame_systems_reduce_to_restricted_polynomials(steps in 1usize..=2, seed: u64) {
        let tame = random_tame(2, steps, 3, seed).unwrap();
        let f = tame.system.with_degree(3).unwrap();
        let rec = phi(&f).unwrap();
        let outcome = is_j_param(rec.reduced(), rec.split(), 2 * 3).unwrap();
        prop_assert!(outcome.is_true());
        prop_assert!(is_jlin_param(rec.reduced(), rec.split()).unwrap());
    }

    #[test]
    fn generators_are_seed_deterministic(seed: u64) {
        let a = random_tame(3, 3, 4, seed).unwrap();
        let b = random_tame(3, 3, 4, seed).unwrap();
        prop_assert_eq!(
            to_canonical_string(&tame_entry(seed, 3, 3, 4, &a)),
            to_canonical_string(&tame_entry(seed, 3, 3, 4, &b))
        );
        let r1 = random_system(3, 4, 0.4, seed).unwrap();
        let r2 = random_system(3, 4, 0.4, seed).unwrap();
        prop_assert_eq!(to_canonical_string(&system_to_json(&r1)), to_canonical_string(&system_to_json(&r2)));
    }
}

#[test]
fn split_at_zero_is_trivially_true() {
    // with no parameters the partial inverse is the formal inverse at 0
    let negative = PolySystem::from_couplings(
        2,
        2,
        [
            (1, vec![2, 2], jacobian_core::ring::int(1)),
            (2, vec![1, 1], jacobian_core::ring::int(1)),
        ],
    )
    .unwrap();
    let none = PartialSplit::new(0);
    assert!(is_jlin_param(&negative, none).unwrap());
    assert!(is_j_param(&negative, none, 4).unwrap().is_true());
    assert!(!is_jlin_param(&negative, PartialSplit::new(2)).unwrap());
}
