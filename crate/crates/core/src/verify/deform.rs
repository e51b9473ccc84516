use rand::Rng;

use super::{excess, poly_rel, real_q, rel, rel_c, Ctx};
use crate::deform::{
    defect_series, formal_ball_lift, formal_normal_order, poisson_bracket, quantization_defect,
    sigma, star_product, FormalFree, HSeriesElement,
};
use crate::elements::{ball_lift, qpoly_mul, QPolynomial};
use crate::error::Result;
use crate::norms::{Family, NormSpec};
use crate::qcombinat::{fiber_count, fiber_words, inversions, MultiIndex, QParam, Word, FIBER_CAP};
use crate::random::Shape;
use crate::C64;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Coefficient scale of the largest entry, at least 1.
fn hs_rel(a: &HSeriesElement, b: &HSeriesElement) -> f64 {
    let scale = b.terms().values().map(|c| c.norm()).fold(1.0, f64::max);
    a.max_coeff_diff(b) / scale
}

/// (−iσ)^s / s! by repeated multiplication.
fn phase_coeff(sig: f64, s: u32) -> C64 {
    let mut t = one();
    for j in 1..=s {
        t *= C64::new(0.0, -sig) / j as f64;
    }
    t
}

/// Star product laws and agreement with the q-plane product on fibers.
pub(super) fn associativity(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let star =
        move |f: &HSeriesElement, g: &HSeriesElement, order: u32| -> Result<HSeriesElement> {
            Ok(star_product(f, g, order, None)?.scale(C64::new(mu.f(1.0), 0.0)))
        };
    ctx.param("order", "0..=4");
    ctx.param("max_degree", 4);
    ctx.random("star product is associative", 1e-9, 200, |i, rng| {
        let order = (i % 5) as u32;
        let shape = Shape::new(rng.gen_range(1..=3), 4, 4);
        let (f, g, h) = (
            shape.hseries(rng, order),
            shape.hseries(rng, order),
            shape.hseries(rng, order),
        );
        let left = star(&star(&f, &g, order)?, &h, order)?;
        let right = star(&f, &star(&g, &h, order)?, order)?;
        Ok(hs_rel(&left, &right))
    })?;
    let pairs: Vec<(MultiIndex, MultiIndex)> = (2..=3)
        .flat_map(|n| {
            let ks = MultiIndex::all_up_to_degree(n, 3);
            let ls = ks.clone();
            ks.into_iter()
                .flat_map(move |k| ls.clone().into_iter().map(move |l| (k.clone(), l)))
        })
        .collect();
    ctx.grid(
        "monomial products carry the truncated phase",
        1e-12,
        &pairs,
        |(k, l), _| {
            let n = k.n();
            let order = 4;
            let a = HSeriesElement::from_terms(n, order, [(0, k.clone(), one())])?;
            let b = HSeriesElement::from_terms(n, order, [(0, l.clone(), one())])?;
            let prod = star(&a, &b, order)?;
            // σ(ℓ, k) = Σ_{i<j} ℓ_i k_j, recomputed from the entries.
            let (ke, le) = (k.entries(), l.entries());
            let sig: u64 = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| (le[i] * ke[j]) as u64)
                .sum();
            let mut expect = HSeriesElement::zero(n, order);
            for s in 0..=order {
                expect.add_term(s, k.add(l), phase_coeff(sig as f64, s));
            }
            Ok(hs_rel(&prod, &expect))
        },
    )?;
    let x1 = HSeriesElement::generator(2, 2, 1);
    let x2 = HSeriesElement::generator(2, 2, 2);
    let b = star(&x2, &x1, 2)?;
    let k = MultiIndex::new(vec![1, 1]);
    let err = rel_c(b.coeff(0, &k), one())
        .max((b.coeff(1, &k) - C64::new(0.0, -1.0)).norm())
        .max((b.coeff(2, &k) - C64::new(-0.5, 0.0)).norm());
    ctx.value("x2 * x1 through order 2", 1e-15, err, format!("{b:?}"));
    ctx.random("unit and order zero", 1e-15, 100, |_, rng| {
        let shape = Shape::new(2, 4, 5);
        let f = shape.hseries(rng, 3);
        let unit = hs_rel(&star(&f, &HSeriesElement::one(2, 3), 3)?, &f);
        let a = shape.hseries(rng, 0);
        let c = shape.hseries(rng, 0);
        let commute = hs_rel(&star(&a, &c, 0)?, &star(&c, &a, 0)?);
        Ok(unit.max(commute))
    })?;
    let fibers: Vec<(usize, f64)> = (0..60)
        .flat_map(|i| [0.1, -0.05, 0.01].map(|h| (i, h)))
        .collect();
    ctx.grid(
        "truncated product tracks the fiber product",
        0.0,
        &fibers,
        |&(_, h0), rng| {
            let order = 8;
            let shape = Shape::new(rng.gen_range(2..=3), 4, 4);
            let q1 = real_q(1.0);
            let (a, b) = (shape.qpoly(rng, q1), shape.qpoly(rng, q1));
            let prod = star(
                &HSeriesElement::from_qpoly(&a, order),
                &HSeriesElement::from_qpoly(&b, order),
                order,
            )?
            .evaluate(h0);
            let exact = qpoly_mul(
                &a.with_q(QParam::unimodular(h0)),
                &b.with_q(QParam::unimodular(h0)),
                None,
            )?;
            let mut bound = 0.0;
            for (k, ca) in a.terms() {
                for (l, cb) in b.terms() {
                    let x = (h0 * sigma(l, k)? as f64).abs();
                    let fact: f64 = (1..=order + 1).map(f64::from).product();
                    bound += ca.norm() * cb.norm() * x.powi(order as i32 + 1) / fact * x.exp();
                }
            }
            let diff: f64 = prod.sub(&exact)?.terms().values().map(|c| c.norm()).sum();
            Ok(excess(diff, bound + 1e-15))
        },
    )
}

fn commutative(rng: &mut impl Rng, n: usize, degree: u32, terms: usize) -> QPolynomial {
    Shape::new(n, degree, terms).qpoly(rng, real_q(1.0))
}

/// The commutator over h approaches i times the bracket at rate h.
pub(super) fn defect(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let spec = NormSpec::simple(Family::PolydiskL1, 1.0)?;
    let dq = move |f: &QPolynomial, g: &QPolynomial, h: f64| -> Result<f64> {
        Ok(mu.f(quantization_defect(f, g, h, &spec)?))
    };
    ctx.param("norm", "polydisk rho=1");
    ctx.param("h", "1e-1,1e-2,1e-3,1e-4");
    let q1 = real_q(1.0);
    let (x1, x2) = (
        QPolynomial::generator(2, q1, 1),
        QPolynomial::generator(2, q1, 2),
    );
    let h = 0.01;
    let d = dq(&x1, &x2, h)?;
    let exact = ((one() - C64::from_polar(1.0, -h)) / h - C64::new(0.0, 1.0)).norm();
    ctx.value(
        "(x1, x2) at h = 0.01 matches the exact phase",
        1e-12,
        rel(d, exact),
        format!("{d}"),
    );
    ctx.value(
        "(x1, x2) at h = 0.01 is about h/2",
        0.05,
        rel(d, 0.005),
        format!("{d}"),
    );
    ctx.random(
        "commutator and termwise forms agree",
        1e-8,
        200,
        |i, rng| {
            let h = [0.1, 0.01, 0.001][i % 3];
            let n = rng.gen_range(2..=3);
            let (f, g) = (commutative(rng, n, 4, 4), commutative(rng, n, 4, 4));
            let a = dq(&f, &g, h)?;
            let b = defect_series(&f, &g, h, &spec)?;
            Ok((a - b).abs() / b.max(1.0))
        },
    )?;
    let hs = [1e-1, 1e-2, 1e-3, 1e-4];
    ctx.random("defect is first order in h", 0.0, 50, |_, rng| {
        let n = rng.gen_range(2..=3);
        let (f, g) = (commutative(rng, n, 4, 4), commutative(rng, n, 4, 4));
        let ds = hs
            .iter()
            .map(|&h| dq(&f, &g, h))
            .collect::<Result<Vec<f64>>>()?;
        if ds[3] < 1e-13 {
            // No pair with unequal twists: the defect vanishes identically.
            return Ok(ds
                .iter()
                .map(|d| d - 1e-12)
                .fold(f64::NEG_INFINITY, f64::max));
        }
        let pts: Vec<(f64, f64)> = hs.iter().zip(&ds).map(|(h, d)| (h.ln(), d.ln())).collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        Ok((slope - 1.0).abs() - 0.1)
    })?;
    ctx.random(
        "defect over h tends to the second-order term",
        1e-2,
        100,
        |_, rng| {
            let n = rng.gen_range(2..=3);
            let (f, g) = (commutative(rng, n, 3, 4), commutative(rng, n, 3, 4));
            let mut lim = QPolynomial::zero(n, real_q(1.0));
            for (k, a) in f.terms() {
                for (l, b) in g.terms() {
                    let (skl, slk) = (sigma(k, l)? as f64, sigma(l, k)? as f64);
                    lim.add_term(k.add(l), a * b * (skl * skl - slk * slk) / 2.0);
                }
            }
            let target: f64 = lim.terms().values().map(|c| c.norm()).sum();
            let h = 1e-4;
            let ratio = dq(&f, &g, h)? / h;
            Ok((ratio - target).abs() / target.max(1e-3))
        },
    )?;
    ctx.random(
        "defect of an element with itself vanishes",
        1e-12,
        50,
        |_, rng| {
            let f = commutative(rng, 3, 4, 5);
            dq(&f, &f, 0.01)
        },
    )?;
    let b = poisson_bracket(&x1, &x2)?;
    let k = MultiIndex::new(vec![1, 1]);
    ctx.value(
        "{x1, x2} = x1 x2",
        1e-15,
        rel_c(b.coeff(&k), one()) + (b.terms().len() as f64 - 1.0).abs(),
        format!("{b:?}"),
    );
    ctx.random(
        "bracket antisymmetry, Leibniz and Jacobi",
        1e-10,
        100,
        |_, rng| {
            let n = rng.gen_range(2..=3);
            let (f, g, h) = (
                commutative(rng, n, 3, 4),
                commutative(rng, n, 3, 4),
                commutative(rng, n, 3, 4),
            );
            let anti = poly_rel(
                &poisson_bracket(&f, &g)?,
                &poisson_bracket(&g, &f)?.scale(-one()),
            );
            let gh = qpoly_mul(&g, &h, None)?;
            let leibniz_rhs = qpoly_mul(&poisson_bracket(&f, &g)?, &h, None)?.add(&qpoly_mul(
                &g,
                &poisson_bracket(&f, &h)?,
                None,
            )?)?;
            let leibniz = poly_rel(&poisson_bracket(&f, &gh)?, &leibniz_rhs);
            let jacobi = poisson_bracket(&f, &poisson_bracket(&g, &h)?)?
                .add(&poisson_bracket(&g, &poisson_bracket(&h, &f)?)?)?
                .add(&poisson_bracket(&h, &poisson_bracket(&f, &g)?)?)?;
            let scale = f.terms().len() * g.terms().len() * h.terms().len();
            let jac = jacobi
                .terms()
                .values()
                .map(|c| c.norm())
                .fold(0.0, f64::max)
                / (100.0 * scale as f64);
            Ok(anti.max(leibniz).max(jac))
        },
    )?;
    Ok(())
}

/// The formal ball lift normal-orders to x^k through every order.
pub(super) fn formal_lift(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let lift = move |k: &MultiIndex, order: u32| -> Result<FormalFree> {
        let u = formal_ball_lift(k, order, FIBER_CAP)?;
        let mut out = FormalFree::zero(u.n(), order);
        for ((p, w), c) in u.terms() {
            out.add_term(*p, w.clone(), mu.c(*c));
        }
        Ok(out)
    };
    ctx.param("order", "0..=3");
    ctx.param("max_degree", 5);
    let cases: Vec<(MultiIndex, u32)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 5))
        .flat_map(|k| (0..=3).map(move |o| (k.clone(), o)))
        .collect();
    ctx.grid(
        "normal order of the lift is x^k",
        1e-12,
        &cases,
        |(k, order), _| {
            let x = formal_normal_order(&lift(k, *order)?)?;
            let expect = HSeriesElement::from_terms(k.n(), *order, [(0, k.clone(), one())])?;
            Ok(hs_rel(&x, &expect))
        },
    )?;
    ctx.grid(
        "lift coefficients are (i m)^p / p! over the fiber size",
        1e-14,
        &cases,
        |(k, order), _| {
            let u = lift(k, *order)?;
            let size = fiber_count(k)? as f64;
            let mut worst = 0.0f64;
            for w in fiber_words(k, FIBER_CAP)? {
                let m = inversions(&w) as f64;
                for p in 0..=*order {
                    let expect = phase_coeff(-m, p) / size;
                    worst = worst.max((u.coeff(p, &w) - expect).norm());
                }
            }
            Ok(worst)
        },
    )?;
    ctx.grid(
        "order zero is the ball lift at q = 1",
        1e-14,
        &cases,
        |(k, _), _| {
            let u = lift(k, 0)?;
            let b = ball_lift(k, real_q(1.0), FIBER_CAP)?;
            let mut worst = 0.0f64;
            for (w, c) in b.terms() {
                worst = worst.max((u.coeff(0, w) - c).norm());
            }
            Ok(worst.max((u.terms().len() as f64 - b.terms().len() as f64).abs()))
        },
    )?;
    let u = lift(&MultiIndex::new(vec![1, 1]), 1)?;
    let err = (u.coeff(0, &Word::new(vec![1, 2])) - C64::new(0.5, 0.0)).norm()
        + (u.coeff(0, &Word::new(vec![2, 1])) - C64::new(0.5, 0.0)).norm()
        + u.coeff(1, &Word::new(vec![1, 2])).norm()
        + (u.coeff(1, &Word::new(vec![2, 1])) - C64::new(0.0, 0.5)).norm();
    ctx.value(
        "lift of (1,1) through order 1",
        1e-15,
        err,
        format!("{u:?}"),
    );
    let u = lift(&MultiIndex::new(vec![0, 3, 0]), 3)?;
    let single = u.terms().len() == 1 && u.coeff(0, &Word::new(vec![2, 2, 2])) == one();
    ctx.assert(
        "axis index lifts to a single word",
        single,
        format!("{u:?}"),
    );
    Ok(())
}
