//! Property suites over the scalar field, the frame calculus, contact pair
//! structures and subframes.

mod support;

use std::sync::Arc;

use proptest::prelude::*;

use contact_pair_lab::scalar::{rat, Rational, ScalarExpr};
use support::*;

fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-3i64..=3, 0..n, 0u32..=2), 1..=max_terms)
}

fn rational(n: usize) -> impl Strategy<Value = ScalarExpr> {
    (poly(n, 2), poly(n, 1)).prop_map(|(a, b)| rational_fn(&a, &b))
}

fn field() -> impl Strategy<Value = Vec<Terms>> {
    prop::collection::vec(poly(6, 2), 6)
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-8i64..=8, 1i64..=16), n).prop_map(|v| v.into_iter().map(|(p, q)| rat(p, q)).collect())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn fx(k: usize) -> &'static Fixture {
    &fixtures()[k % 3]
}

macro_rules! holds {
    ($e:expr) => {{
        let r = $e;
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }};
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn canonical_form_is_a_congruence(a in rational(3), b in rational(3), op in 0usize..4) {
        holds!(congruence(&a, &b, op));
    }

    #[test]
    fn field_axioms_hold(a in rational(3), b in rational(3), c in rational(3)) {
        holds!(field_axioms(&a, &b, &c));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in rational(3), b in rational(3), p in point(3)) {
        holds!(evaluation_homomorphism(&a, &b, &p));
    }

    #[test]
    fn derivatives_obey_leibniz_and_schwarz(a in rational(3), b in rational(3), i in 0usize..3, j in 0usize..3) {
        holds!(leibniz_schwarz(&a, &b, i, j));
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn d_squared_vanishes(k in 0usize..3, f in poly(6, 3), a in field()) {
        let fx = fx(k);
        holds!(d_squared(fx, &build_in(&f, fx.dim()), &vector_in(&a, fx.dim())));
    }

    #[test]
    fn exterior_derivative_carries_the_half(k in 0usize..3, a in field(), x in field(), y in field()) {
        let fx = fx(k);
        let n = fx.dim();
        holds!(half_convention(fx, &vector_in(&a, n), &vector_in(&x, n), &vector_in(&y, n)));
    }

    #[test]
    fn associated_metric_matches_the_evaluation_convention(k in 0usize..3, x in field(), y in field()) {
        let fx = fx(k);
        holds!(association(fx, &vector_in(&x, fx.dim()), &vector_in(&y, fx.dim())));
    }

    #[test]
    fn levi_civita_is_torsion_free(k in 0usize..3, x in field(), y in field()) {
        let fx = fx(k);
        holds!(torsion_free(fx, &vector_in(&x, fx.dim()), &vector_in(&y, fx.dim())));
    }

    #[test]
    fn curvature_is_tensorial(k in 0usize..3, f in poly(6, 2), a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let fx = fx(k);
        let n = fx.dim();
        let m = &fx.mcp;
        holds!(curvature_tensorial(fx, &build_in(&f, n), &m.basis(a % n), &m.basis(b % n), &m.basis(c % n)));
    }

    #[test]
    fn first_bianchi_identity(k in 0usize..3, f in poly(6, 2), a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let fx = fx(k);
        let n = fx.dim();
        let m = &fx.mcp;
        let x = &m.basis(a % n).scale(&build_in(&f, n)) + &m.basis(b % n);
        holds!(bianchi(fx, &x, &m.basis(b % n), &m.basis(c % n)));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn b_is_symmetric_normal_and_function_bilinear(case in 0usize..64, u in poly(6, 2), a in 0usize..4, b in 0usize..4) {
        let cases = subframe_cases();
        let (fx, sub) = &cases[case % cases.len()];
        holds!(b_properties(fx, sub, &build_in(&u, fx.dim()), a, b));
    }

    #[test]
    fn mean_curvature_ignores_the_spanning_set(case in 0usize..64, c in prop::collection::vec(poly(6, 2), 1..6), s in poly(6, 2)) {
        let cases = subframe_cases();
        let (fx, sub) = &cases[case % cases.len()];
        let n = fx.dim();
        let coeffs: Vec<ScalarExpr> = c.iter().map(|t| build_in(t, n)).collect();
        holds!(h_recombination(fx, sub, &coeffs, &build_in(&s, n)));
    }
}

#[test]
fn reeb_system_has_a_unique_solution() {
    for fx in fixtures() {
        reeb_uniqueness(fx).unwrap();
    }
}

#[test]
fn complex_structures_and_reeb_fields() {
    for fx in fixtures() {
        complex_structures(fx).unwrap();
        reeb_metric(fx).unwrap();
    }
}

#[test]
fn profile_constraints_hold_on_the_corpus() {
    profile_constraints().unwrap();
}

#[test]
fn characteristic_leaves_are_minimal() {
    characteristic_leaves_minimal().unwrap();
}

#[test]
fn coordinate_frames_share_one_presentation() {
    let fx = &fixtures()[0];
    assert!(Arc::ptr_eq(&fx.scenario.frame, fx.mcp.frame()));
}
