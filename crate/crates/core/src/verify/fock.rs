use rand::Rng;

use super::{excess, poly_rel, real_q, rel, Ctx};
use crate::elements::{qpoly_mul, QPolynomial};
use crate::error::Result;
use crate::fock::{
    apply_monomial, dilate, fock_apply, l2_norm, op_norm_bounds, sandwich_constant, vacuum_image,
    vacuum_lower_bound, vacuum_norm, FockVector,
};
use crate::norms::{qpoly_norm, Family, NormSpec};
use crate::qcombinat::MultiIndex;
use crate::random::Shape;
use crate::C64;

/// √(Π_j (q²;q²)_{k_j}) q^{Σ_{i<j} k_i k_j}, assembled factor by factor.
fn vacuum_oracle(k: &MultiIndex, q: f64) -> f64 {
    let q2 = q * q;
    let mut prod = 1.0;
    for &kj in k.entries() {
        for t in 1..=kj {
            prod *= 1.0 - q2.powi(t as i32);
        }
    }
    prod.sqrt() * q.powi(k.pair_sum() as i32)
}

fn vacuum(n: usize) -> FockVector {
    FockVector::from([(MultiIndex::zeros(n), C64::new(1.0, 0.0))])
}

/// Closed-form vacuum images against the composed generator action.
pub(super) fn vacuum_images(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let image = move |k: &MultiIndex, q: f64| mu.f(vacuum_image(k, q));
    ctx.param("q", "0.3,0.5,0.8");
    ctx.param("max_degree", 6);
    let cases: Vec<(MultiIndex, f64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 6))
        .flat_map(|k| [0.3, 0.5, 0.8].map(|q| (k.clone(), q)))
        .collect();
    ctx.grid(
        "closed form matches the generator action",
        1e-12,
        &cases,
        |(k, q), _| {
            let closed = image(k, *q);
            let (amp, target) = apply_monomial(k, &MultiIndex::zeros(k.n()), *q);
            let landed = if &target == k { 0.0 } else { 1.0 };
            Ok(rel(closed, amp)
                .max(rel(closed, vacuum_oracle(k, *q)))
                .max(landed))
        },
    )?;
    let q = 0.5f64;
    let k = MultiIndex::new(vec![1, 1]);
    let v = image(&k, q);
    let expect = 0.75 * 0.5;
    ctx.value(
        "e_(1,1) amplitude at q = 0.5",
        1e-15,
        rel(v, expect),
        format!("{v}"),
    );
    let k = MultiIndex::new(vec![2]);
    let v = image(&k, q);
    let expect = (0.75f64 * 0.9375).sqrt();
    ctx.value(
        "e_(2) amplitude at q = 0.5",
        1e-15,
        rel(v, expect),
        format!("{v}"),
    );
    ctx.random("representation is multiplicative", 1e-12, 200, |i, rng| {
        let qp = real_q([0.3, 0.5, 0.8][i % 3]);
        let shape = Shape::new(rng.gen_range(1..=3), 3, 4);
        let (a, b) = (shape.qpoly(rng, qp), shape.qpoly(rng, qp));
        let mut v = FockVector::new();
        for _ in 0..3 {
            v.insert(shape.multi_index(rng), crate::random::coeff(rng));
        }
        let lhs = fock_apply(&qpoly_mul(&a, &b, None)?, &v, None)?;
        let rhs = fock_apply(&a, &fock_apply(&b, &v, None)?, None)?;
        let as_poly = |w: FockVector| QPolynomial::from_terms(shape.n, qp, w);
        Ok(poly_rel(&as_poly(lhs)?, &as_poly(rhs)?))
    })
}

#[derive(Clone, Copy, Debug)]
struct SandwichCase {
    q: f64,
    rho: f64,
    n: usize,
    draw: usize,
}

/// (q²;q²)^{n/2} ‖a‖^{(2)} ≤ ‖π(a)e_0‖ ≤ lower ≤ ‖a‖_D, and the constant against τ.
pub(super) fn sandwich(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("q", "0.3,0.5,0.8");
    ctx.param("rho", "0.5,1");
    ctx.param("n", "1,2");
    ctx.param("depth", 8);
    let mut cases = Vec::new();
    for q in [0.3, 0.5, 0.8] {
        for rho in [0.5, 1.0] {
            for n in [1, 2] {
                for draw in 0..25 {
                    cases.push(SandwichCase { q, rho, n, draw });
                }
            }
        }
    }
    ctx.grid(
        "vacuum norm matches the vacuum vector",
        1e-12,
        &cases,
        |c, rng| {
            let a = Shape::new(c.n, 5, 6).qpoly(rng, real_q(c.q));
            let direct = l2_norm(&fock_apply(&dilate(&a, c.rho), &vacuum(c.n), None)?);
            Ok(rel(mu.f(vacuum_norm(&a, c.rho)?), direct))
        },
    )?;
    ctx.grid("operator bounds are ordered", 1e-9, &cases, |c, rng| {
        let a = Shape::new(c.n, 4, 5).qpoly(rng, real_q(c.q));
        let b = op_norm_bounds(&a, c.rho, 8)?;
        let floor = vacuum_lower_bound(&a, c.rho)?;
        Ok(excess(b.lower, b.upper)
            .max(excess(b.vacuum, b.lower))
            .max(excess(floor, b.vacuum)))
    })?;
    ctx.grid(
        "sandwich constant against the doubled radius",
        1e-12,
        &cases,
        |c, rng| {
            let a = Shape::new(c.n, 6, 6).qpoly(rng, real_q(c.q));
            let k = sandwich_constant(c.n, c.q, c.rho, 2.0 * c.rho)?;
            let d = qpoly_norm(&a, &NormSpec::simple(Family::PolydiskL1, c.rho)?)?;
            Ok(excess(k * d, vacuum_norm(&a, 2.0 * c.rho)?))
        },
    )?;
    let few: Vec<SandwichCase> = cases
        .iter()
        .filter(|c| c.draw < 4 && c.rho == 1.0)
        .copied()
        .collect();
    ctx.grid("lower bound grows with the cutoff", 1e-8, &few, |c, rng| {
        let a = Shape::new(c.n, 3, 4).qpoly(rng, real_q(c.q));
        let mut worst = f64::NEG_INFINITY;
        let mut prev = 0.0;
        for d in 2..=10 {
            let lower = op_norm_bounds(&a, c.rho, d)?.lower;
            worst = worst.max(excess(prev, lower));
            prev = lower;
        }
        Ok(worst)
    })
}

/// The single generator x at q = 0.5: truncated norms √(1 − q^{2(D+1)}) approach 1.
pub(super) fn generator_limit(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let q = 0.5f64;
    ctx.param("q", q);
    ctx.param("max_depth", 20);
    let x = QPolynomial::generator(1, real_q(q), 1);
    let depths: Vec<u32> = (0..=20).collect();
    ctx.grid(
        "truncated norms follow the closed form",
        1e-12,
        &depths,
        |&d, _| {
            let lower = mu.f(op_norm_bounds(&x, 1.0, d)?.lower);
            Ok(rel(lower, (1.0 - q.powi(2 * (d as i32 + 1))).sqrt()))
        },
    )?;
    let top = mu.f(op_norm_bounds(&x, 1.0, 20)?.lower);
    ctx.value(
        "depth 20 is within 1e-10 of 1",
        1e-10,
        (1.0 - top).abs(),
        format!("{top}"),
    );
    let one = QPolynomial::one(2, real_q(q));
    let b = op_norm_bounds(&one, 1.0, 6)?;
    ctx.value(
        "identity has norm 1",
        1e-12,
        rel(mu.f(b.lower), 1.0),
        format!("{b:?}"),
    );
    Ok(())
}
