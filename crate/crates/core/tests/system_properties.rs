mod common;

use proptest::prelude::*;

use common::{poly_no_constant, system};
use jacobian_core::det::{det_bareiss, det_cofactor};
use jacobian_core::json::{system_from_json, system_to_json, to_canonical_string};
use jacobian_core::system::compose_systems;
use jacobian_core::{Poly, PolySystem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polys_round_trip(f in system(3, 4, 8)) {
        let back = PolySystem::from_polys(&f.to_polys()).unwrap();
        prop_assert_eq!(back, f.normalized_degree());
        let same = PolySystem::from_polys_with_degree(&f.to_polys(), f.d()).unwrap();
        prop_assert_eq!(same, f);
    }

    #[test]
    fn json_round_trip(f in system(3, 4, 8)) {
        let v = system_to_json(&f);
        prop_assert_eq!(system_from_json(&v).unwrap(), f.clone());
        let text = to_canonical_string(&v);
        prop_assert_eq!(text, to_canonical_string(&system_to_json(&f)));
    }

    #[test]
    fn det_at_origin_is_one(f in system(3, 3, 8)) {
        prop_assert_eq!(f.jacobian_det().constant_term(), Poly::one(3).constant_term());
    }

    #[test]
    fn jacobian_entries_are_partials(f in system(3, 3, 8)) {
        let polys = f.to_polys();
        let m = f.jacobian_matrix();
        for i in 1..=3 {
            for j in 1..=3 {
                prop_assert_eq!(m.entry(i, j), &polys[j - 1].derivative(i).unwrap());
            }
        }
    }

    #[test]
    fn determinant_is_multiplicative_under_composition(f in system(2, 2, 4), g in system(2, 2, 4)) {
        let fg = compose_systems(&f, &g).unwrap();
        let lhs = fg.jacobian_det();
        let rhs = &f.jacobian_det().compose(&g.to_polys()).unwrap() * &g.jacobian_det();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_matches_ring_level(f in system(2, 3, 4), g in system(2, 2, 4)) {
        let fg = compose_systems(&f, &g).unwrap();
        let direct: Vec<Poly> = f.to_polys().iter().map(|p| p.compose(&g.to_polys()).unwrap()).collect();
        prop_assert_eq!(fg.to_polys(), direct);
        prop_assert_eq!(compose_systems(&f, &PolySystem::identity(2, 2).unwrap()).unwrap(), f.normalized_degree());
    }

    #[test]
    fn bareiss_agrees_with_cofactor(
        entries in prop::collection::vec(poly_no_constant(2, 2, 3), 16)
    ) {
        let m: Vec<Vec<Poly>> = entries.chunks(4).map(<[Poly]>::to_vec).collect();
        prop_assert_eq!(det_bareiss(&m, 2), det_cofactor(&m, 2));
    }

    #[test]
    fn bareiss_agrees_on_jacobians(f in system(4, 3, 10)) {
        let m = f.jacobian_matrix();
        prop_assert_eq!(det_bareiss(m.rows(), 4), det_cofactor(m.rows(), 4));
    }
}

#[test]
fn nonidentity_linear_part_is_rejected() {
    let z1 = Poly::var(2, 1);
    let z2 = Poly::var(2, 2);
    assert!(PolySystem::from_polys(&[&z1 + &z2, z2.clone()]).is_err());
    assert!(PolySystem::from_polys(&[&z1 + &Poly::one(2), z2]).is_err());
}
