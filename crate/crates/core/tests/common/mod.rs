#![allow(dead_code)]

use proptest::prelude::*;

use jacobian_core::ring::{ratio, Monomial};
use jacobian_core::{Poly, PolySystem, Rational};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=2).prop_map(|(a, b)| ratio(a, b))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-3i64..=-1, 1i64..=3], 1i64..=2).prop_map(|(a, b)| ratio(a, b))
}

/// Polynomials in `nvars` variables of total degree at most `maxdeg`.
pub fn poly(nvars: usize, maxdeg: u32, maxterms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0..=maxdeg, nvars), small_rational()),
        0..=maxterms,
    )
    .prop_map(move |terms| {
        let terms = terms.into_iter().filter_map(|(exps, c)| {
            let m = Monomial::from_pairs(exps.iter().enumerate().map(|(v, &e)| (v as u32 + 1, e)));
            (m.degree() <= maxdeg).then_some((m, c))
        });
        Poly::from_terms(nvars, terms).expect("variables in range")
    })
}

/// Polynomials with no constant term.
pub fn poly_no_constant(nvars: usize, maxdeg: u32, maxterms: usize) -> impl Strategy<Value = Poly> {
    poly(nvars, maxdeg, maxterms).prop_map(|p| {
        let c = p.constant_term();
        &p - &Poly::constant(p.nvars(), c)
    })
}

/// Systems with declared degree `d` and up to `maxterms` couplings.
pub fn system(n: usize, d: u32, maxterms: usize) -> impl Strategy<Value = PolySystem> {
    let coupling = (1..=n, prop::collection::vec(1..=n, 2..=d as usize), nonzero_rational());
    prop::collection::vec(coupling, 0..=maxterms)
        .prop_map(move |cs| PolySystem::from_couplings(n, d, cs).expect("valid couplings"))
}

/// Systems whose top-degree couplings are present, so `d` is the actual degree.
pub fn system_of_degree(n: usize, d: u32, maxterms: usize) -> impl Strategy<Value = PolySystem> {
    (
        system(n, d, maxterms),
        1..=n,
        prop::collection::vec(1..=n, d as usize),
        nonzero_rational(),
    )
        .prop_map(move |(f, row, js, c)| {
            let mut cs: Vec<(usize, Vec<usize>, Rational)> =
                f.couplings().map(|(s, c)| (s.row, s.js.clone(), c.clone())).collect();
            if f.couplings().all(|(s, _)| s.k < d) {
                cs.push((row, js, c));
            }
            PolySystem::from_couplings(n, d, cs).expect("valid couplings")
        })
}

pub fn identity_map(n: usize) -> Vec<Poly> {
    Poly::vars(n)
}
