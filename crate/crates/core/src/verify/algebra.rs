use rand::Rng;

use super::{excess, polar_q, poly_rel, real_q, rel, rel_c, Ctx};
use crate::elements::{
    ball_lift, ball_lift_weights, fiber_eval, free_mul, laurent_mul, normal_order, polydisk_lift,
    qpoly_mul, tau_flip, word_monomial, FreeElement, LaurentElement, QPolynomial,
};
use crate::error::Result;
use crate::norms::{free_norm, qpoly_norm, Family, NormSpec};
use crate::qcombinat::{
    fiber_words, inversions, weight_polydisk, word_profile, MultiIndex, QParam, Word, FIBER_CAP,
};
use crate::random::{coeff, Shape};
use crate::C64;

const PI: f64 = std::f64::consts::PI;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// ‖flip(a)‖ at 1/q equals ‖a‖ at q for the polydisk and ball norms; the flip is an involution.
pub(super) fn flip_isometry(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("rho", "0.3,0.9");
    ctx.param("q", "0.5, 2, 0.8e^(i pi/3)");
    ctx.param("elements", 200);
    let qs = [real_q(0.5), real_q(2.0), polar_q(0.8, PI / 3.0)];
    let flip = move |a: &QPolynomial| mu.poly(&tau_flip(a));
    ctx.random(
        "flip preserves polydisk and ball norms",
        1e-10,
        200,
        |i, rng| {
            let q = qs[i % 3];
            let a = Shape::new(rng.gen_range(2..=3), 6, 6).qpoly(rng, q);
            let b = flip(&a);
            let mut worst = 0.0f64;
            for family in [Family::PolydiskL1, Family::Ball] {
                for rho in [0.3, 0.9] {
                    let spec = NormSpec::simple(family, rho)?;
                    worst = worst.max(rel(qpoly_norm(&b, &spec)?, qpoly_norm(&a, &spec)?));
                }
            }
            Ok(worst)
        },
    )?;
    ctx.random("flip is an involution", 1e-12, 50, |i, rng| {
        let a = Shape::new(3, 5, 6).qpoly(rng, qs[i % 3]);
        Ok(poly_rel(&flip(&flip(&a)), &a))
    })?;
    let q = real_q(0.5);
    let x12 = QPolynomial::monomial(2, q, MultiIndex::new(vec![1, 1]), one());
    let image = flip(&x12);
    let expect = QPolynomial::monomial(2, q.inv(), MultiIndex::new(vec![1, 1]), C64::new(0.5, 0.0));
    ctx.value(
        "x1 x2 maps to 0.5 x1 x2 over q = 2",
        1e-15,
        poly_rel(&image, &expect),
        format!("{image:?}"),
    );
    let x1 = QPolynomial::generator(3, q, 1);
    let expect = QPolynomial::generator(3, q.inv(), 3);
    ctx.value(
        "x1 maps to xn",
        1e-15,
        poly_rel(&flip(&x1), &expect),
        "n = 3",
    );
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    q: f64,
    theta: f64,
    rho: f64,
    n: usize,
}

fn cells(count: usize) -> Vec<(Cell, usize)> {
    let mut out = Vec::new();
    for (q, theta) in [(0.5, 0.0), (2.0, 0.0), (0.7, PI / 3.0), (1.0, 0.4)] {
        for rho in [0.5, 1.0] {
            for n in [2, 3] {
                for i in 0..count {
                    out.push((Cell { q, theta, rho, n }, i));
                }
            }
        }
    }
    out
}

/// Normal ordering does not increase norms: polydisk vs Taylor and free polydisk, ball vs circ.
pub(super) fn quotient_contraction(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let order = move |f: &FreeElement, q: QParam| -> Result<QPolynomial> {
        Ok(mu.poly(&normal_order(f, q)?))
    };
    ctx.param("q", "0.5, 2, 0.7e^(i pi/3), e^(0.4i)");
    ctx.param("rho", "0.5,1");
    ctx.param("tau", "1,2");
    let grid = cells(63);
    ctx.param("elements", grid.len());
    ctx.grid(
        "contraction on random free elements",
        1e-12,
        &grid,
        |(c, _), rng| {
            let q = polar_q(c.q, c.theta);
            let f = Shape::new(c.n, 5, 6).free(rng);
            let a = order(&f, q)?;
            let d = qpoly_norm(&a, &NormSpec::simple(Family::PolydiskL1, c.rho)?)?;
            let b = qpoly_norm(&a, &NormSpec::simple(Family::Ball, c.rho)?)?;
            let taylor = free_norm(&f, &NormSpec::simple(Family::FreeTaylor, c.rho)?)?;
            let circ = free_norm(&f, &NormSpec::simple(Family::FreeBallCirc, c.rho)?)?;
            let mut worst = excess(d, taylor).max(excess(b, circ));
            for tau in [1.0, 2.0] {
                let fp = free_norm(
                    &f,
                    &NormSpec::new(Family::FreePolydisk, c.rho, Some(tau), None)?,
                )?;
                worst = worst.max(excess(d, fp));
            }
            Ok(worst)
        },
    )?;
    // Scaled lifts attain equality.
    ctx.grid("lifts attain equality", 1e-10, &cells(4), |(c, _), rng| {
        let q = polar_q(c.q, c.theta);
        let k = Shape::new(c.n, 6, 1).multi_index(rng);
        let z = coeff(rng) + 0.1;
        let pl = polydisk_lift(&k, q).scale(z);
        let bl = ball_lift(&k, q, FIBER_CAP)?.scale(z);
        let d = qpoly_norm(
            &order(&pl, q)?,
            &NormSpec::simple(Family::PolydiskL1, c.rho)?,
        )?;
        let b = qpoly_norm(&order(&bl, q)?, &NormSpec::simple(Family::Ball, c.rho)?)?;
        let taylor = free_norm(&pl, &NormSpec::simple(Family::FreeTaylor, c.rho)?)?;
        let circ = free_norm(&bl, &NormSpec::simple(Family::FreeBallCirc, c.rho)?)?;
        Ok(rel(d, taylor).max(rel(b, circ)))
    })
}

#[derive(Clone, Debug)]
struct LiftCase {
    k: MultiIndex,
    q: f64,
    theta: f64,
    rho: f64,
}

/// Both lifts normal-order to x^k and attain the quotient norms; the ball lift is optimal.
pub(super) fn lift_attainment(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let qs = [
        (0.5, 0.0),
        (2.0, 0.0),
        (0.6, PI / 4.0),
        (1.0, 0.0),
        (1.0, PI / 3.0),
    ];
    ctx.param("q", "0.5, 2, 0.6e^(i pi/4), 1, e^(i pi/3)");
    ctx.param("rho", "0.5,1.3");
    ctx.param("max_degree", 7);
    let cases: Vec<LiftCase> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 7))
        .flat_map(|k| qs.into_iter().map(move |(q, theta)| (k.clone(), q, theta)))
        .flat_map(|(k, q, theta)| {
            [0.5, 1.3].into_iter().map(move |rho| LiftCase {
                k: k.clone(),
                q,
                theta,
                rho,
            })
        })
        .collect();
    let weighted_lift = move |k: &MultiIndex, q: QParam| -> Result<FreeElement> {
        // a_k = Σ c⁰_α q^{m(α)} ζ_α with the weights passed through the mutation hook.
        let mut out = FreeElement::zero(k.n());
        for (w, c0) in ball_lift_weights(k, q, FIBER_CAP)? {
            let m = inversions(&w) as i64;
            out.add_term(w, q.powi(m) * mu.f(c0));
        }
        Ok(out)
    };
    ctx.grid(
        "polydisk lift attains the polydisk norm",
        1e-10,
        &cases,
        |c, _| {
            let q = polar_q(c.q, c.theta);
            let f = polydisk_lift(&c.k, q);
            let x = QPolynomial::monomial(c.k.n(), q, c.k.clone(), one());
            let taylor = free_norm(&f, &NormSpec::simple(Family::FreeTaylor, c.rho)?)?;
            let target = weight_polydisk(&c.k, q) * c.rho.powi(c.k.degree() as i32);
            let d = qpoly_norm(&x, &NormSpec::simple(Family::PolydiskL1, c.rho)?)?;
            Ok(rel(taylor, target)
                .max(rel(d, target))
                .max(poly_rel(&normal_order(&f, q)?, &x)))
        },
    )?;
    ctx.grid("ball lift attains the ball norm", 1e-10, &cases, |c, _| {
        let q = polar_q(c.q, c.theta);
        let f = weighted_lift(&c.k, q)?;
        let x = QPolynomial::monomial(c.k.n(), q, c.k.clone(), one());
        let circ = free_norm(&f, &NormSpec::simple(Family::FreeBallCirc, c.rho)?)?;
        let b = qpoly_norm(&x, &NormSpec::simple(Family::Ball, c.rho)?)?;
        let lib = ball_lift(&c.k, q, FIBER_CAP)?;
        let lib_gap = free_norm(
            &lib.add(&f.scale(-one()))?,
            &NormSpec::simple(Family::FreeTaylor, 1.0)?,
        )?;
        Ok(rel(circ, b)
            .max(poly_rel(&normal_order(&f, q)?, &x))
            .max(lib_gap))
    })?;
    ctx.random(
        "ball lift beats feasible perturbations",
        1e-12,
        200,
        |i, rng| {
            let (qa, theta) = qs[i % qs.len()];
            let q = polar_q(qa, theta);
            let n = rng.gen_range(2..=3);
            let k = loop {
                let k = Shape::new(n, 7, 1).multi_index(rng);
                if k.entries().iter().filter(|&&e| e > 0).count() >= 2 {
                    break k;
                }
            };
            let base = weighted_lift(&k, q)?;
            let weights = ball_lift_weights(&k, q, FIBER_CAP)?;
            let mut v: Vec<C64> = weights.iter().map(|_| coeff(rng)).collect();
            let mean = v.iter().sum::<C64>() / v.len() as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let eps = 10f64.powf(rng.gen_range(-6.0..-1.0));
            let mut other = FreeElement::zero(n);
            for ((w, c0), dv) in weights.iter().zip(&v) {
                let m = inversions(w) as i64;
                other.add_term(w.clone(), q.powi(m) * (C64::new(*c0, 0.0) + dv * eps));
            }
            let circ = NormSpec::simple(Family::FreeBallCirc, 1.0)?;
            let x = QPolynomial::monomial(n, q, k.clone(), one());
            let feasible = poly_rel(&normal_order(&other, q)?, &x);
            Ok(excess(free_norm(&base, &circ)?, free_norm(&other, &circ)?).max(feasible - 1e-12))
        },
    )?;
    let q = real_q(0.5);
    let pl = polydisk_lift(&MultiIndex::new(vec![1, 1]), q);
    ctx.value(
        "polydisk lift of (1,1) at q = 0.5",
        1e-15,
        (pl.coeff(&Word::new(vec![2, 1])) - C64::new(0.5, 0.0)).norm()
            + (pl.terms().len() as f64 - 1.0).abs(),
        format!("{pl:?}"),
    );
    let bl = weighted_lift(&MultiIndex::new(vec![1, 1]), q)?;
    let err = (bl.coeff(&Word::new(vec![1, 2])) - C64::new(0.2, 0.0)).norm()
        + (bl.coeff(&Word::new(vec![2, 1])) - C64::new(0.4, 0.0)).norm();
    ctx.value(
        "ball lift of (1,1) at q = 0.5",
        1e-12,
        err,
        format!("{bl:?}"),
    );
    Ok(())
}

/// Products of generators in the Laurent algebra are x^{p(α)} z^{−m(α)}; fiber evaluation
/// is multiplicative.
pub(super) fn laurent_words(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("n", "1..=3");
    ctx.param("max_length", 7);
    let mut words = Vec::new();
    for n in 1..=3usize {
        for d in 0..=7 {
            words.extend(
                Word::all_of_length(n, d, 1 << 20)?
                    .into_iter()
                    .map(|w| (n, w)),
            );
        }
    }
    ctx.grid(
        "generator products are word monomials",
        1e-12,
        &words,
        |(n, w), _| {
            let mut prod = LaurentElement::one(*n);
            for &l in w.letters() {
                prod = laurent_mul(&prod, &LaurentElement::generator(*n, l as usize), None)?;
            }
            let mono = word_monomial(w, *n)?;
            let ((k, p), c) = mono.terms().iter().next().expect("monomial");
            let shifted = LaurentElement::monomial(k.clone(), mu.int_signed(*p), *c);
            let expect =
                LaurentElement::monomial(word_profile(w, *n)?, -(inversions(w) as i64), one());
            let diff = |a: &LaurentElement, b: &LaurentElement| -> Result<f64> {
                Ok(a.add(&b.scale(-one()))?
                    .terms()
                    .values()
                    .map(|c| c.norm())
                    .fold(0.0, f64::max))
            };
            Ok(diff(&prod, &shifted)?.max(diff(&expect, &shifted)?))
        },
    )?;
    let qs = [
        real_q(0.5),
        real_q(2.0),
        polar_q(1.0, PI / 3.0),
        polar_q(0.7, 1.1),
    ];
    ctx.random(
        "fiber evaluation is multiplicative",
        1e-10,
        200,
        |i, rng| {
            let q = qs[i % qs.len()];
            let shape = Shape::new(rng.gen_range(1..=3), 4, 5);
            let (a, b) = (shape.laurent(rng, 4), shape.laurent(rng, 4));
            let lhs = fiber_eval(&laurent_mul(&a, &b, None)?, q);
            let rhs = qpoly_mul(&fiber_eval(&a, q), &fiber_eval(&b, q), None)?;
            Ok(poly_rel(&lhs, &rhs))
        },
    )?;
    let x1 = LaurentElement::generator(2, 1);
    let x2 = LaurentElement::generator(2, 2);
    let p = laurent_mul(&x2, &x1, None)?;
    let ok = p.terms().len() == 1 && p.coeff(&MultiIndex::new(vec![1, 1]), -1) == one();
    ctx.assert("x2 x1 = x1 x2 z^-1", ok, format!("{p:?}"));
    let z = LaurentElement::monomial(MultiIndex::zeros(2), 1, one());
    let zi = LaurentElement::monomial(MultiIndex::zeros(2), -1, one());
    ctx.assert(
        "z z^-1 = 1",
        laurent_mul(&z, &zi, None)? == LaurentElement::one(2),
        "",
    );
    let q0 = polar_q(0.5, 0.3);
    let vanish = z.add(&LaurentElement::one(2).scale(-q0.value()))?;
    ctx.value(
        "z - q0 vanishes on the fiber at q0",
        1e-15,
        fiber_eval(&vanish, q0)
            .terms()
            .values()
            .map(|c| c.norm())
            .sum(),
        "",
    );
    Ok(())
}

/// Phase of ζ_α by bubble sort, one factor q^{−1} per adjacent swap of a descent.
fn rewrite_phase(w: &Word, q: C64) -> C64 {
    let mut v = w.letters().to_vec();
    let qi = q.inv();
    let mut phase = one();
    for end in (1..v.len()).rev() {
        for i in 0..end {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                phase *= qi;
            }
        }
    }
    phase
}

/// Normal ordering against the rewriting oracle, plus the algebra identities around it.
pub(super) fn normal_order_rewrite(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let qs = [real_q(0.5), real_q(2.0), polar_q(1.0, PI / 3.0)];
    ctx.param("q", "0.5, 2, e^(i pi/3)");
    ctx.param("n", "1..=4");
    ctx.param("max_length", 8);
    let mut words = Vec::new();
    for n in 1..=4usize {
        for d in 0..=8 {
            words.extend(
                Word::all_of_length(n, d, 1 << 20)?
                    .into_iter()
                    .map(|w| (n, w)),
            );
        }
    }
    ctx.param("words", words.len());
    ctx.grid(
        "normal order matches bubble-sort rewriting",
        1e-10,
        &words,
        |(n, w), _| {
            let f = FreeElement::word(*n, w.clone(), one());
            let k = word_profile(w, *n)?;
            let mut worst = 0.0f64;
            for q in qs {
                let a = mu.poly(&normal_order(&f, q)?);
                let c = a.coeff(&k);
                worst = worst.max(rel_c(c, rewrite_phase(w, q.value())));
                worst = worst.max((a.terms().len() as f64 - 1.0).abs());
            }
            Ok(worst)
        },
    )?;
    ctx.random("normal order is multiplicative", 1e-10, 300, |i, rng| {
        let q = qs[i % 3];
        let shape = Shape::new(rng.gen_range(1..=3), 4, 5);
        let (f, g) = (shape.free(rng), shape.free(rng));
        let lhs = mu.poly(&normal_order(&free_mul(&f, &g, None)?, q)?);
        let rhs = qpoly_mul(&normal_order(&f, q)?, &normal_order(&g, q)?, None)?;
        Ok(poly_rel(&lhs, &rhs))
    })?;
    ctx.random("q-plane product is associative", 1e-9, 500, |i, rng| {
        let q = qs[i % 3];
        let shape = Shape::new(rng.gen_range(2..=3), 5, 4);
        let (a, b, c) = (
            shape.qpoly(rng, q),
            shape.qpoly(rng, q),
            shape.qpoly(rng, q),
        );
        let left = qpoly_mul(&qpoly_mul(&a, &b, None)?, &c, None)?;
        let right = qpoly_mul(&a, &qpoly_mul(&b, &c, None)?, None)?;
        Ok(poly_rel(&left, &right))
    })?;
    ctx.random(
        "homogeneous components of products",
        1e-12,
        100,
        |i, rng| {
            let q = qs[i % 3];
            let shape = Shape::new(2, 4, 5);
            let (a, b) = (shape.qpoly(rng, q), shape.qpoly(rng, q));
            let ab = qpoly_mul(&a, &b, None)?;
            let mut worst = 0.0f64;
            let mut total = QPolynomial::zero(2, q);
            for l in 0..=8u64 {
                let mut sum = QPolynomial::zero(2, q);
                for i in 0..=l {
                    sum = sum.add(&qpoly_mul(&a.homogeneous(i), &b.homogeneous(l - i), None)?)?;
                }
                worst = worst.max(poly_rel(&sum, &ab.homogeneous(l)));
                total = total.add(&a.homogeneous(l))?;
            }
            Ok(worst.max(poly_rel(&total, &a)))
        },
    )?;
    let q = real_q(0.5);
    let (x1, x2) = (
        QPolynomial::generator(2, q, 1),
        QPolynomial::generator(2, q, 2),
    );
    let s = x1.add(&x2)?;
    let sq = qpoly_mul(&s, &s, None)?;
    let expect = QPolynomial::from_terms(
        2,
        q,
        [
            (MultiIndex::new(vec![2, 0]), one()),
            (MultiIndex::new(vec![1, 1]), C64::new(3.0, 0.0)),
            (MultiIndex::new(vec![0, 2]), one()),
        ],
    )?;
    ctx.value(
        "(x1 + x2)^2 at q = 0.5",
        1e-15,
        poly_rel(&sq, &expect),
        format!("{sq:?}"),
    );
    let f = FreeElement::word(2, Word::new(vec![2, 1, 2, 1]), one());
    let a = mu.poly(&normal_order(&f, q)?);
    ctx.value(
        "zeta_2121 at q = 0.5 is 8 x1^2 x2^2",
        1e-15,
        rel_c(a.coeff(&MultiIndex::new(vec![2, 2])), C64::new(8.0, 0.0)),
        format!("{a:?}"),
    );
    // Fibers ordered lexicographically start at δ(k), which normal-orders to x^k.
    let k = MultiIndex::new(vec![2, 1, 2]);
    let first = fiber_words(&k, FIBER_CAP)?.remove(0);
    let d = mu.poly(&normal_order(&FreeElement::word(3, first, one()), q)?);
    ctx.value(
        "sorted word normal-orders to x^k",
        1e-15,
        rel_c(d.coeff(&k), one()),
        format!("{d:?}"),
    );
    Ok(())
}
