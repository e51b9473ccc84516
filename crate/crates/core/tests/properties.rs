//! Algebraic laws on seeded random elements, driven by proptest.

use proptest::prelude::*;

use qdisk_core::deform::{poisson_bracket, star_product, HSeriesElement};
use qdisk_core::elements::{
    fiber_eval, free_mul, laurent_mul, normal_order, qpoly_mul, tau_flip, FreeElement, QPolynomial,
};
use qdisk_core::norms::{free_norm, laurent_norm, omega, qpoly_norm};
use qdisk_core::qcombinat::{inversions, word_profile, MultiIndex};
use qdisk_core::random::{stream, Shape, Stream};
use qdisk_core::{Family, NormSpec, QParam, C64};

fn q_strategy() -> impl Strategy<Value = QParam> {
    (0.3f64..2.5, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, t)| QParam::new(C64::from_polar(r, t)).unwrap())
}

fn rng(seed: u64) -> Stream {
    stream(seed, 7, 0)
}

fn close(a: &QPolynomial, b: &QPolynomial, tol: f64) -> bool {
    let scale = b.terms().values().map(|c| c.norm()).fold(1.0, f64::max);
    a.max_coeff_diff(b) <= tol * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qplane_product_is_associative(seed: u64, q in q_strategy(), n in 1usize..=3) {
        let mut r = rng(seed);
        let s = Shape::new(n, 4, 4);
        let (a, b, c) = (s.qpoly(&mut r, q), s.qpoly(&mut r, q), s.qpoly(&mut r, q));
        let left = qpoly_mul(&qpoly_mul(&a, &b, None).unwrap(), &c, None).unwrap();
        let right = qpoly_mul(&a, &qpoly_mul(&b, &c, None).unwrap(), None).unwrap();
        prop_assert!(close(&left, &right, 1e-9));
    }

    #[test]
    fn qplane_norms_are_submultiplicative(seed: u64, q in q_strategy(), n in 1usize..=3, rho in 0.2f64..2.0) {
        let mut r = rng(seed);
        let s = Shape::new(n, 5, 5);
        let (a, b) = (s.qpoly(&mut r, q), s.qpoly(&mut r, q));
        let ab = qpoly_mul(&a, &b, None).unwrap();
        for family in [Family::PolydiskL1, Family::Ball] {
            let spec = NormSpec::simple(family, rho).unwrap();
            let lhs = qpoly_norm(&ab, &spec).unwrap();
            let rhs = qpoly_norm(&a, &spec).unwrap() * qpoly_norm(&b, &spec).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{family}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn free_norms_are_submultiplicative(seed: u64, n in 1usize..=3, rho in 0.2f64..2.0, tau in 1.0f64..3.0) {
        let mut r = rng(seed);
        let s = Shape::new(n, 4, 5);
        let (f, g) = (s.free(&mut r), s.free(&mut r));
        let fg = free_mul(&f, &g, None).unwrap();
        for spec in [
            NormSpec::simple(Family::FreeTaylor, rho).unwrap(),
            NormSpec::new(Family::FreePolydisk, rho, Some(tau), None).unwrap(),
            NormSpec::simple(Family::FreeBallBullet, rho).unwrap(),
            NormSpec::simple(Family::FreeBallCirc, rho).unwrap(),
        ] {
            let lhs = free_norm(&fg, &spec).unwrap();
            let rhs = free_norm(&f, &spec).unwrap() * free_norm(&g, &spec).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{}: {lhs} > {rhs}", spec.family);
        }
    }

    #[test]
    fn laurent_norm_is_submultiplicative(seed: u64, n in 1usize..=3, rho in 0.2f64..2.0, tau in 1.0f64..3.0) {
        let mut r = rng(seed);
        let s = Shape::new(n, 4, 5);
        let (a, b) = (s.laurent(&mut r, 4), s.laurent(&mut r, 4));
        let spec = NormSpec::new(Family::LaurentDnr, rho, Some(tau), None).unwrap();
        let lhs = laurent_norm(&laurent_mul(&a, &b, None).unwrap(), &spec).unwrap();
        let rhs = laurent_norm(&a, &spec).unwrap() * laurent_norm(&b, &spec).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn normal_order_is_multiplicative(seed: u64, q in q_strategy(), n in 1usize..=3) {
        let mut r = rng(seed);
        let s = Shape::new(n, 4, 4);
        let (f, g) = (s.free(&mut r), s.free(&mut r));
        let lhs = normal_order(&free_mul(&f, &g, None).unwrap(), q).unwrap();
        let rhs = qpoly_mul(&normal_order(&f, q).unwrap(), &normal_order(&g, q).unwrap(), None).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn normal_order_of_a_word_is_a_single_monomial(seed: u64, q in q_strategy(), n in 1usize..=4) {
        let mut r = rng(seed);
        let w = Shape::new(n, 8, 1).word(&mut r);
        let a = normal_order(&FreeElement::word(n, w.clone(), C64::new(1.0, 0.0)), q).unwrap();
        let k = word_profile(&w, n).unwrap();
        let expect = q.powi(-(inversions(&w) as i64));
        prop_assert_eq!(a.terms().len(), 1);
        prop_assert!((a.coeff(&k) - expect).norm() <= 1e-10 * expect.norm().max(1.0));
    }

    #[test]
    fn fiber_evaluation_is_a_homomorphism(seed: u64, q in q_strategy(), n in 1usize..=3) {
        let mut r = rng(seed);
        let s = Shape::new(n, 3, 4);
        let (a, b) = (s.laurent(&mut r, 3), s.laurent(&mut r, 3));
        let lhs = fiber_eval(&laurent_mul(&a, &b, None).unwrap(), q);
        let rhs = qpoly_mul(&fiber_eval(&a, q), &fiber_eval(&b, q), None).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn flip_is_an_isometric_involution(seed: u64, q in q_strategy(), n in 1usize..=3, rho in 0.2f64..1.5) {
        let mut r = rng(seed);
        let a = Shape::new(n, 5, 5).qpoly(&mut r, q);
        let b = tau_flip(&a);
        prop_assert!(close(&tau_flip(&b), &a, 1e-12));
        for family in [Family::PolydiskL1, Family::Ball] {
            let spec = NormSpec::simple(family, rho).unwrap();
            let (x, y) = (qpoly_norm(&a, &spec).unwrap(), qpoly_norm(&b, &spec).unwrap());
            prop_assert!((x - y).abs() <= 1e-10 * x.max(1e-300));
        }
    }

    #[test]
    fn star_product_is_associative(seed: u64, n in 1usize..=3, order in 0u32..=4) {
        let mut r = rng(seed);
        let s = Shape::new(n, 3, 4);
        let (f, g, h) = (s.hseries(&mut r, order), s.hseries(&mut r, order), s.hseries(&mut r, order));
        let left = star_product(&star_product(&f, &g, order, None).unwrap(), &h, order, None).unwrap();
        let right = star_product(&f, &star_product(&g, &h, order, None).unwrap(), order, None).unwrap();
        prop_assert!(left.max_coeff_diff(&right) <= 1e-9);
    }

    #[test]
    fn star_product_matches_fibers_at_small_h(seed: u64, n in 2usize..=3, h0 in -0.05f64..0.05) {
        let mut r = rng(seed);
        let one = QParam::real(1.0).unwrap();
        let s = Shape::new(n, 3, 3);
        let (a, b) = (s.qpoly(&mut r, one), s.qpoly(&mut r, one));
        let order = 10;
        let prod = star_product(&HSeriesElement::from_qpoly(&a, order), &HSeriesElement::from_qpoly(&b, order), order, None)
            .unwrap()
            .evaluate(h0);
        let q = QParam::unimodular(h0);
        let exact = qpoly_mul(&a.with_q(q), &b.with_q(q), None).unwrap();
        prop_assert!(close(&prod, &exact, 1e-12));
    }

    #[test]
    fn poisson_bracket_laws(seed: u64, n in 2usize..=3) {
        let mut r = rng(seed);
        let one = QParam::real(1.0).unwrap();
        let s = Shape::new(n, 3, 3);
        let (f, g, h) = (s.qpoly(&mut r, one), s.qpoly(&mut r, one), s.qpoly(&mut r, one));
        let br = |x: &QPolynomial, y: &QPolynomial| poisson_bracket(x, y).unwrap();
        let mul = |x: &QPolynomial, y: &QPolynomial| qpoly_mul(x, y, None).unwrap();
        prop_assert!(close(&br(&f, &g), &br(&g, &f).scale(C64::new(-1.0, 0.0)), 1e-12));
        let leibniz = mul(&br(&f, &g), &h).add(&mul(&g, &br(&f, &h))).unwrap();
        prop_assert!(close(&br(&f, &mul(&g, &h)), &leibniz, 1e-10));
        let jacobi = br(&f, &br(&g, &h)).add(&br(&g, &br(&h, &f))).unwrap().add(&br(&h, &br(&f, &g))).unwrap();
        prop_assert!(close(&jacobi, &QPolynomial::zero(n, one), 1e-10));
    }

    #[test]
    fn omega_is_subadditive(k in proptest::collection::vec(0u32..4, 3), l in proptest::collection::vec(0u32..4, 3), p in -20i64..20, s in -20i64..20) {
        let (k, l) = (MultiIndex::new(k), MultiIndex::new(l));
        let c = qdisk_core::elements::commutation_exponent(&k, &l) as i64;
        let lhs = omega(&k.add(&l), p + s - c).abs();
        prop_assert!(lhs <= omega(&k, p).abs() + omega(&l, s).abs());
    }
}
