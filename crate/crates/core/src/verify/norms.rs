use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{excess, polar_q, real_q, rel, Ctx, Mutation};
use crate::elements::{
    commutation_exponent, free_mul, laurent_mul, qpoly_mul, Element, FreeElement, LaurentElement,
    QPolynomial,
};
use crate::error::Result;
use crate::norms::{
    bullet_circ_constant, free_norm, lambda_p_compare, laurent_norm, norm, omega, qpoly_norm,
    Family, NormSpec,
};
use crate::qcombinat::{q_pochhammer_inf, MultiIndex};
use crate::random::Shape;
use crate::{HSeriesElement, C64};

/// (0.25; 0.25)_∞ to 16 digits, from an independent high-precision evaluation.
const EULER_QUARTER: f64 = 0.688_537_537_120_339_7;

/// c ‖a‖_D ≤ ‖a‖_B ≤ ‖a‖_D with c = (s; s)_∞^{n/2}, s = min(|q|², |q|^{−2}).
pub(super) fn ball_polydisk_sandwich(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("abs_q", "0.5,2");
    ctx.param("n", "2,3");
    ctx.param("rho", "0.3,1");
    ctx.param("elements_per_cell", 500);
    let euler = q_pochhammer_inf(C64::new(0.25, 0.0), C64::new(0.25, 0.0), 1e-12)?;
    ctx.param("euler_quarter", euler.value.re);
    ctx.param("euler_quarter_factors", euler.factors);
    ctx.value(
        "(0.25;0.25) partial products",
        1e-12,
        (euler.value.re - EULER_QUARTER).abs(),
        format!("{} after {} factors", euler.value.re, euler.factors),
    );
    let mut cells = Vec::new();
    for q in [0.5, 2.0] {
        for n in [2usize, 3] {
            for rho in [0.3, 1.0] {
                for i in 0..500 {
                    cells.push((q, n, rho, i));
                }
            }
        }
    }
    ctx.grid(
        "sandwich on random elements",
        1e-12,
        &cells,
        |&(q, n, rho, _), rng| {
            let qp = polar_q(q, rng.gen_range(0.0..std::f64::consts::TAU));
            let a = Shape::new(n, 6, 6).qpoly(rng, qp);
            let s = (q * q).min(1.0 / (q * q));
            let c = q_pochhammer_inf(C64::new(s, 0.0), C64::new(s, 0.0), 1e-16)?
                .value
                .re
                .powf(n as f64 / 2.0);
            let d = qpoly_norm(&a, &NormSpec::simple(Family::PolydiskL1, rho)?)?;
            let b = mu.f(qpoly_norm(&a, &NormSpec::simple(Family::Ball, rho)?)?);
            Ok(excess(b, d).max(excess(c * d, b)))
        },
    )?;
    let axis: Vec<(f64, usize, u32)> = [0.5, 2.0]
        .into_iter()
        .flat_map(|q| (1..=3).flat_map(move |j| (0..=6).map(move |m| (q, j, m))))
        .collect();
    ctx.grid(
        "axis monomials attain the upper bound",
        1e-12,
        &axis,
        |&(q, j, m), _| {
            let mut k = vec![0; 3];
            k[j - 1] = m;
            let a = QPolynomial::monomial(3, real_q(q), MultiIndex::new(k), C64::new(1.0, 0.0));
            let d = qpoly_norm(&a, &NormSpec::simple(Family::PolydiskL1, 0.7)?)?;
            let b = mu.f(qpoly_norm(&a, &NormSpec::simple(Family::Ball, 0.7)?)?);
            Ok(rel(b, d))
        },
    )
}

#[derive(Clone, Copy, Debug)]
struct FamilyCase {
    family: Family,
    q: f64,
    theta: f64,
    pair: usize,
}

fn spec_for(family: Family, rho: f64) -> Result<NormSpec> {
    NormSpec::new(family, rho, Some(2.0), Some(3))
}

/// ‖ab‖, ‖a‖, ‖b‖ for a random pair; the first ten pairs use a = 1.
fn product_norms(c: &FamilyCase, mu: Mutation, rng: &mut impl Rng) -> Result<(f64, f64, f64)> {
    let n = rng.gen_range(2..=3);
    let rho = *[0.5, 1.0, 1.5].choose(rng).expect("nonempty");
    let spec = spec_for(c.family, rho)?;
    let shape = Shape::new(n, 4, 5);
    let unit = c.pair < 10;
    let scale = C64::new(mu.f(1.0), 0.0);
    match c.family.kind() {
        "qpoly" => {
            let q = polar_q(c.q, c.theta);
            let a = if unit {
                QPolynomial::one(n, q)
            } else {
                shape.qpoly(rng, q)
            };
            let b = shape.qpoly(rng, q);
            let ab = qpoly_mul(&a, &b, None)?.scale(scale);
            Ok((
                qpoly_norm(&ab, &spec)?,
                qpoly_norm(&a, &spec)?,
                qpoly_norm(&b, &spec)?,
            ))
        }
        "free" => {
            let a = if unit {
                FreeElement::one(n)
            } else {
                shape.free(rng)
            };
            let b = shape.free(rng);
            let ab = free_mul(&a, &b, None)?.scale(scale);
            Ok((
                free_norm(&ab, &spec)?,
                free_norm(&a, &spec)?,
                free_norm(&b, &spec)?,
            ))
        }
        _ => {
            let a = if unit {
                LaurentElement::one(n)
            } else {
                shape.laurent(rng, 6)
            };
            let b = shape.laurent(rng, 6);
            let ab = laurent_mul(&a, &b, None)?.scale(scale);
            Ok((
                laurent_norm(&ab, &spec)?,
                laurent_norm(&a, &spec)?,
                laurent_norm(&b, &spec)?,
            ))
        }
    }
}

/// ‖ab‖ ≤ ‖a‖‖b‖ for the seven submultiplicative families.
pub(super) fn submultiplicativity(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("pairs_per_family", 1000);
    ctx.param("rho", "0.5,1,1.5");
    ctx.param("tau", 2);
    let qs = [(0.5, 0.0), (2.0, 0.0), (1.0, std::f64::consts::FRAC_PI_3)];
    for family in Family::SUBMULTIPLICATIVE {
        let cases: Vec<FamilyCase> = (0..1000)
            .map(|pair| {
                let (q, theta) = qs[pair % 3];
                FamilyCase {
                    family,
                    q,
                    theta,
                    pair,
                }
            })
            .collect();
        ctx.grid(
            &format!("submultiplicative: {family}"),
            1e-9,
            &cases,
            |c, rng| {
                let (ab, a, b) = product_norms(c, mu, rng)?;
                Ok(excess(ab, a * b))
            },
        )?;
    }
    let q = real_q(0.5);
    let units: Vec<(Family, Element)> = Family::ALL
        .into_iter()
        .map(|f| {
            let e = match f.kind() {
                "qpoly" => Element::QPoly(QPolynomial::one(3, q)),
                "free" => Element::Free(FreeElement::one(3), None),
                "laurent" => Element::Laurent(LaurentElement::one(3)),
                _ => Element::HSeries(HSeriesElement::one(3, 3)),
            };
            (f, e)
        })
        .collect();
    ctx.grid("unit has norm one", 1e-15, &units, |(f, e), _| {
        Ok(rel(norm(e, &spec_for(*f, 0.7)?)?, 1.0))
    })?;
    let rho1 = 1.0;
    let rho = 0.5;
    ctx.random("bullet and circ norms compare", 1e-12, 300, |_, rng| {
        let n = rng.gen_range(1..=3);
        let f = Shape::new(n, 6, 8).free(rng);
        let bullet = free_norm(&f, &NormSpec::simple(Family::FreeBallBullet, rho)?)?;
        let circ = free_norm(&f, &NormSpec::simple(Family::FreeBallCirc, rho)?)?;
        let bullet1 = free_norm(&f, &NormSpec::simple(Family::FreeBallBullet, rho1)?)?;
        let c = bullet_circ_constant(n, rho, rho1)?;
        Ok(excess(bullet, circ).max(excess(circ, c * bullet1)))
    })
}

/// ‖x_2^m · x_1^m‖ = |q|^{−m²} in the unweighted coefficient norm at |q| = 0.5.
pub(super) fn blowup(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let q = real_q(0.5);
    ctx.param("q", 0.5);
    ctx.param("rho", 1);
    let flat = NormSpec::simple(Family::PolydiskL1, 1.0)?;
    let mut values = Vec::new();
    let mut weighted = Vec::new();
    for m in 1..=6u32 {
        let x2 = QPolynomial::monomial(2, q, MultiIndex::new(vec![0, m]), C64::new(1.0, 0.0));
        let x1 = QPolynomial::monomial(2, q, MultiIndex::new(vec![m, 0]), C64::new(1.0, 0.0));
        let prod = mu.poly(&qpoly_mul(&x2, &x1, None)?);
        // Unweighted: evaluate the coefficients with |q| = 1 weights.
        values.push(qpoly_norm(&prod.with_q(real_q(1.0)), &flat)?);
        weighted.push(qpoly_norm(&prod, &flat)?);
    }
    let cases: Vec<(u32, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as u32 + 1, v))
        .collect();
    ctx.grid(
        "product norm equals |q|^(-m^2)",
        1e-12,
        &cases,
        |&(m, v), _| Ok(rel(v, 2f64.powi((m * m) as i32))),
    )?;
    let first = values.iter().position(|&v| v > 1e6).map(|i| i + 1);
    ctx.param("first_m_above_1e6", format!("{first:?}"));
    ctx.assert(
        "exceeds 1e6 first at m = 5",
        first == Some(5),
        format!("{values:?}"),
    );
    let wcases: Vec<(usize, f64)> = weighted.into_iter().enumerate().collect();
    ctx.grid(
        "polydisk norm of the product stays 1",
        1e-12,
        &wcases,
        |&(_, v), _| Ok(rel(v, 1.0)),
    )
}

#[derive(Clone, Copy, Debug)]
struct LambdaCase {
    p: f64,
    s: f64,
    n: usize,
    rho: f64,
    tau: f64,
    // Read only through Debug, to locate the worst case.
    #[allow(dead_code)]
    draw: usize,
}

/// Weighted ℓ^p against ℓ^s sequence norms with the explicit comparison constant.
pub(super) fn lambda_comparison(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let inf = f64::INFINITY;
    let constant = |p: f64, s: f64, n: usize, rho: f64, tau: f64| -> Result<f64> {
        let c = lambda_p_compare(&BTreeMap::new(), n, p, s, rho, tau)?.constant;
        Ok(mu.f(c))
    };
    let c = constant(1.0, inf, 1, 0.5, 1.0)?;
    ctx.value(
        "p=1, s=inf, n=1, rho=0.5, tau=1 gives 2",
        1e-15,
        rel(c, 2.0),
        format!("{c}"),
    );
    let mut single = BTreeMap::new();
    single.insert(MultiIndex::zeros(2), 1.0);
    let r = lambda_p_compare(&single, 2, 1.0, 2.0, 0.5, 1.0)?;
    ctx.value(
        "singleton family has all norms 1",
        1e-15,
        [r.norm_p_rho, r.norm_s_rho, r.norm_s_tau]
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max),
        format!("{r:?}"),
    );
    let mut cases = Vec::new();
    for (p, s) in [(1.0, 2.0), (1.0, inf), (2.0, inf)] {
        for n in 1..=3 {
            for (rho, tau) in [(0.5, 1.0), (0.9, 1.0), (1.0, 3.0)] {
                for draw in 0..100 {
                    cases.push(LambdaCase {
                        p,
                        s,
                        n,
                        rho,
                        tau,
                        draw,
                    });
                }
            }
        }
    }
    ctx.grid("constant matches closed form", 1e-12, &cases, |c, _| {
        let ell = if c.s.is_infinite() {
            c.p
        } else {
            1.0 / (1.0 / c.p - 1.0 / c.s)
        };
        let expect = (c.tau.powf(ell) / (c.tau.powf(ell) - c.rho.powf(ell))).powf(c.n as f64 / ell);
        Ok(rel(constant(c.p, c.s, c.n, c.rho, c.tau)?, expect))
    })?;
    ctx.grid(
        "both inequalities on random families",
        1e-12,
        &cases,
        |c, rng| {
            let shape = Shape::new(c.n, 6, 12);
            let mut values = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=12) {
                values.insert(shape.multi_index(rng), rng.gen::<f64>());
            }
            let r = lambda_p_compare(&values, c.n, c.p, c.s, c.rho, c.tau)?;
            let k = mu.f(r.constant);
            Ok(excess(r.norm_s_rho, r.norm_p_rho).max(excess(r.norm_p_rho, k * r.norm_s_tau)))
        },
    )
}

/// |min{|λ| : λ ∈ [p, p + S]}| by direct scan.
fn interval_min(k: &MultiIndex, p: i64) -> i64 {
    (p..=p + k.pair_sum() as i64)
        .map(i64::abs)
        .min()
        .expect("nonempty interval")
}

/// |ω(k+ℓ, p+s−Σ_{i>j} k_i ℓ_j)| ≤ |ω(k,p)| + |ω(ℓ,s)|, and the interval characterization of |ω|.
pub(super) fn omega_subadditivity(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let om = move |k: &MultiIndex, p: i64| mu.int_signed(omega(k, p));
    ctx.param("max_degree", 5);
    ctx.param("p_range", "-30..=30");
    ctx.param("n", "1..=3");
    let pairs: Vec<(MultiIndex, MultiIndex)> = (1..=3)
        .flat_map(|n| {
            let ks = MultiIndex::all_up_to_degree(n, 5);
            let ks2 = ks.clone();
            ks.into_iter()
                .flat_map(move |k| ks2.clone().into_iter().map(move |l| (k.clone(), l)))
        })
        .collect();
    ctx.grid("subadditivity", 0.0, &pairs, |(k, l), _| {
        let c = commutation_exponent(k, l) as i64;
        let kl = k.add(l);
        let mut worst = i64::MIN;
        for p in -30..=30 {
            let wk = om(k, p).abs();
            for s in -30..=30 {
                let lhs = om(&kl, p + s - c).abs();
                worst = worst.max(lhs - wk - om(l, s).abs());
            }
        }
        Ok(worst as f64)
    })?;
    let singles: Vec<(MultiIndex, i64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 5))
        .flat_map(|k| (-30..=30).map(move |p| (k.clone(), p)))
        .collect();
    ctx.grid("interval characterization", 0.0, &singles, |(k, p), _| {
        Ok((om(k, *p).abs() - interval_min(k, *p)).abs() as f64)
    })?;
    let one_one = MultiIndex::new(vec![1, 1]);
    let examples = [(5i64, 5i64), (-1, 0), (-3, -2)];
    ctx.grid("omega examples", 0.0, &examples, |&(p, e), _| {
        Ok((om(&one_one, p) - e).abs() as f64)
    })?;
    let a = LaurentElement::monomial(one_one, -3, C64::new(1.0, 0.0));
    let v = laurent_norm(
        &a,
        &NormSpec::new(Family::LaurentDnr, 1.0, Some(2.0), None)?,
    )?;
    ctx.value("laurent norm example", 1e-15, rel(v, 4.0), format!("{v}"));
    Ok(())
}
