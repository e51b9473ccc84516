use rand::Rng;

use super::{excess, polar_q, real_q, rel, Ctx};
use crate::elements::{FreeElement, QPolynomial};
use crate::error::Result;
use crate::norms::{Family, NormSpec};
use crate::qcombinat::QParam;
use crate::random::Shape;
use crate::spectral::{
    contractive_check, poincare_gap, radius_estimate, radius_scan, Generators, TupleSpec, Verdict,
    CONTRACTIVE_MARGIN,
};

const PI: f64 = std::f64::consts::PI;

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn coords(
    n: usize,
    q: QParam,
    family: Family,
    rho: f64,
    p: f64,
    depth: usize,
) -> Result<TupleSpec> {
    TupleSpec::new(
        Generators::Coordinates { n, q },
        NormSpec::simple(family, rho)?,
        p,
        depth,
    )
}

fn explicit(n: usize, q: QParam) -> Generators {
    Generators::QPolys((1..=n).map(|j| QPolynomial::generator(n, q, j)).collect())
}

/// Closed-form depth values of coordinate tuples, and the contractivity verdicts.
pub(super) fn examples(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("max_depth", 10);
    ctx.param("p", 2);
    let mut cells = Vec::new();
    for n in 1..=4usize {
        for theta in [0.0, 0.9, PI / 3.0] {
            for rho in [0.5, 1.0, 1.7] {
                for d in 1..=10usize {
                    cells.push((n, theta, rho, d));
                }
            }
        }
    }
    ctx.grid(
        "polydisk estimate is rho sqrt(n)",
        1e-12,
        &cells,
        |&(n, theta, rho, d), _| {
            let t = coords(
                n,
                QParam::unimodular(theta),
                Family::PolydiskL1,
                rho,
                2.0,
                10,
            )?;
            Ok(rel(mu.f(radius_estimate(&t, d)?), rho * (n as f64).sqrt()))
        },
    )?;
    ctx.grid(
        "ball estimate is the binomial closed form",
        1e-12,
        &cells,
        |&(n, theta, rho, d), _| {
            let t = coords(n, QParam::unimodular(theta), Family::Ball, rho, 2.0, 10)?;
            let expect = rho * binom((d + n - 1) as u64, (n - 1) as u64).powf(0.5 / d as f64);
            Ok(rel(radius_estimate(&t, d)?, expect))
        },
    )?;
    let t = coords(2, QParam::unimodular(0.0), Family::Ball, 1.0, 2.0, 10)?;
    let v = radius_estimate(&t, 2)?;
    ctx.value(
        "n = 2, d = 2, rho = 1 ball value",
        1e-12,
        rel(v, 1.316_074_012_952_492_4),
        format!("{v}"),
    );
    let seq: Vec<f64> = (1..=10)
        .map(|d| radius_estimate(&t, d))
        .collect::<Result<_>>()?;
    ctx.assert(
        "ball estimates decrease toward rho",
        seq.windows(2).all(|w| w[1] < w[0]) && seq.iter().all(|&v| v > 1.0),
        format!("{seq:?}"),
    );

    // Grouped evaluation against explicit word enumeration.
    let mut groups = Vec::new();
    for (n, dmax) in [(1usize, 8usize), (2, 8), (3, 5)] {
        for (r, theta) in [(0.5, 0.0), (2.0, 0.0), (1.0, 0.7), (0.8, 2.0)] {
            for family in [Family::PolydiskL1, Family::Ball, Family::PolydiskL2] {
                for p in [1.0, 2.0, f64::INFINITY] {
                    groups.push((n, dmax, r, theta, family, p));
                }
            }
        }
    }
    ctx.grid(
        "grouped estimates match word enumeration",
        1e-10,
        &groups,
        |&(n, dmax, r, theta, family, p), _| {
            let q = polar_q(r, theta);
            let grouped = coords(n, q, family, 0.9, p, dmax)?;
            let generic = TupleSpec::new(explicit(n, q), NormSpec::simple(family, 0.9)?, p, dmax)?;
            let mut worst = 0.0f64;
            for d in 1..=dmax {
                worst = worst.max(rel(
                    radius_estimate(&grouped, d)?,
                    radius_estimate(&generic, d)?,
                ));
            }
            Ok(worst)
        },
    )?;
    let mut free_groups = Vec::new();
    for n in 1..=3usize {
        for tau in [None, Some(1.0), Some(2.0)] {
            for p in [1.0, 2.0, f64::INFINITY] {
                free_groups.push((n, tau, p));
            }
        }
    }
    ctx.grid(
        "free coordinate counts match word enumeration",
        1e-10,
        &free_groups,
        |&(n, tau, p), _| {
            let family = if tau.is_some() {
                Family::FreePolydisk
            } else {
                Family::FreeTaylor
            };
            let norm = NormSpec::new(family, 0.7, tau, None)?;
            let grouped = TupleSpec::new(Generators::FreeCoordinates { n }, norm, p, 6)?;
            let gens = (1..=n).map(|j| FreeElement::generator(n, j)).collect();
            let generic = TupleSpec::new(Generators::Frees(gens), norm, p, 6)?;
            let mut worst = 0.0f64;
            for d in 1..=6 {
                worst = worst.max(rel(
                    radius_estimate(&grouped, d)?,
                    radius_estimate(&generic, d)?,
                ));
            }
            Ok(worst)
        },
    )?;

    // Contractivity: coordinates pass below r, the free-polydisk tuple fails at rho tau.
    let (rho, r) = (0.5, 0.8);
    let pass = contractive_check(
        &coords(2, QParam::unimodular(0.4), Family::PolydiskL1, rho, 2.0, 10)?,
        r,
        CONTRACTIVE_MARGIN,
    )?;
    let flat = pass
        .sequence
        .iter()
        .map(|v| rel(*v, rho))
        .fold(0.0, f64::max);
    ctx.value(
        "coordinate tuple has sup values rho",
        1e-12,
        flat,
        format!("{:?}", pass.sequence),
    );
    ctx.assert(
        "coordinate tuple passes",
        pass.verdict == Verdict::Pass,
        format!("{pass:?}"),
    );
    let witness = TupleSpec::new(
        Generators::FreeCoordinates { n: 2 },
        NormSpec::new(Family::FreePolydisk, rho, Some(2.0), None)?,
        f64::INFINITY,
        10,
    )?;
    let fail = contractive_check(&witness, r, CONTRACTIVE_MARGIN)?;
    let at = fail
        .sequence
        .iter()
        .map(|v| rel(*v, 2.0 * rho))
        .fold(0.0, f64::max);
    ctx.value(
        "alternating words reach rho tau",
        1e-12,
        at,
        format!("{:?}", fail.sequence),
    );
    ctx.assert(
        "free-polydisk tuple fails",
        fail.verdict == Verdict::Fail,
        format!("{fail:?}"),
    );
    let zero = TupleSpec::new(
        Generators::QPolys(vec![QPolynomial::zero(2, real_q(0.5)); 2]),
        NormSpec::simple(Family::PolydiskL1, 1.0)?,
        2.0,
        4,
    )?;
    let z = contractive_check(&zero, 0.1, CONTRACTIVE_MARGIN)?;
    ctx.assert(
        "zero tuple passes with value 0",
        z.verdict == Verdict::Pass && z.sequence.iter().all(|&v| v == 0.0),
        format!("{z:?}"),
    );
    let singles: Vec<(f64, f64, Family)> = [(0.5, 0.0), (2.0, 0.0), (1.0, 1.0)]
        .into_iter()
        .flat_map(|(a, th)| {
            [Family::PolydiskL1, Family::Ball, Family::PolydiskL2].map(|f| (a, th, f))
        })
        .collect();
    ctx.grid(
        "one coordinate gives rho",
        1e-12,
        &singles,
        |&(a, th, family), _| {
            let t = coords(1, polar_q(a, th), family, 0.6, 2.0, 8)?;
            Ok((1..=8)
                .map(|d| radius_estimate(&t, d).map(|v| rel(v, 0.6)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max))
        },
    )?;

    ctx.random(
        "exponent ordering on random tuples",
        1e-12,
        100,
        |_, rng| {
            let q = real_q(0.5);
            let shape = Shape::new(2, 2, 3);
            let gens: Vec<QPolynomial> = (0..rng.gen_range(1..=3))
                .map(|_| shape.qpoly(rng, q))
                .collect();
            let at = |p: f64| -> Result<Vec<f64>> {
                let t = TupleSpec::new(
                    Generators::QPolys(gens.clone()),
                    NormSpec::simple(Family::PolydiskL1, 0.8)?,
                    p,
                    4,
                )?;
                (1..=4).map(|d| radius_estimate(&t, d)).collect()
            };
            let (one, two, inf) = (at(1.0)?, at(2.0)?, at(f64::INFINITY)?);
            let mut worst = f64::NEG_INFINITY;
            for d in 0..4 {
                worst = worst
                    .max(excess(two[d], one[d]))
                    .max(excess(inf[d], two[d]));
            }
            Ok(worst)
        },
    )?;
    let ordered: Vec<(usize, usize)> = (1..=3).flat_map(|n| (1..=8).map(move |d| (n, d))).collect();
    ctx.grid(
        "ball estimate stays below polydisk at |q| = 0.5",
        1e-12,
        &ordered,
        |&(n, d), _| {
            let q = real_q(0.5);
            let b = radius_estimate(&coords(n, q, Family::Ball, 1.0, 2.0, 8)?, d)?;
            let p = radius_estimate(&coords(n, q, Family::PolydiskL1, 1.0, 2.0, 8)?, d)?;
            Ok(excess(b, p))
        },
    )?;
    let scan = radius_scan(
        &coords(3, QParam::unimodular(0.2), Family::PolydiskL1, 1.0, 2.0, 6)?,
        1.0,
    )?;
    let mut bad = 0.0f64;
    for (d, m) in scan.running_max.iter().enumerate() {
        let top = scan.per_rho.iter().map(|s| s[d]).fold(0.0, f64::max);
        bad = bad
            .max(rel(*m, top))
            .max(rel(*m, (1.0 - 0.5f64.powi(8)) * 3f64.sqrt()));
    }
    ctx.value(
        "radius scan keeps the grid maximum",
        1e-12,
        bad,
        format!("{:?}", scan.running_max),
    );
    Ok(())
}

/// Polydisk against ball estimates of the unimodular coordinate tuple.
pub(super) fn poincare(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let gap = move |n: usize, q: QParam, rho: f64, depth: usize| -> Result<(f64, f64)> {
        let (p, b) = poincare_gap(n, q, rho, depth)?;
        Ok((p, mu.f(b)))
    };
    let q = QParam::unimodular(0.7);
    ctx.param("q", "e^(0.7i)");
    ctx.param("n", 2);
    ctx.param("depth", "10,50");
    let (p10, b10) = gap(2, q, 1.0, 10)?;
    ctx.value(
        "depth 10 polydisk is sqrt 2",
        1e-12,
        rel(p10, 2f64.sqrt()),
        format!("{p10}"),
    );
    ctx.value(
        "depth 10 ball is 11^(1/20)",
        1e-12,
        rel(b10, 11f64.powf(0.05)),
        format!("{b10}"),
    );
    ctx.assert("depth 10 ball exceeds rho", b10 > 1.0, format!("{b10}"));
    let (p50, b50) = gap(2, q, 1.0, 50)?;
    ctx.value(
        "depth 50 ball is 51^(1/100)",
        1e-12,
        rel(b50, 51f64.powf(0.01)),
        format!("{b50}"),
    );
    let ratio = p50 / b50;
    ctx.value(
        "depth 50 ratio exceeds 1.35",
        0.0,
        (1.35 - ratio).max(0.0),
        format!("{ratio}"),
    );
    ctx.value(
        "depth 50 ratio stays below sqrt 2",
        0.0,
        (ratio - 2f64.sqrt()).max(0.0),
        format!("{ratio}"),
    );
    let cells: Vec<(usize, usize, f64)> = (2..=4)
        .flat_map(|n| {
            [1usize, 2, 5, 10, 20, 30]
                .into_iter()
                .flat_map(move |d| [0.5, 1.0].map(|rho| (n, d, rho)))
        })
        .collect();
    ctx.grid(
        "ball estimate within the depth bound",
        1e-12,
        &cells,
        |&(n, d, rho), _| {
            let (p, b) = gap(n, QParam::unimodular(1.1), rho, d)?;
            let bound = rho * ((d + n - 1) as f64).powf((n - 1) as f64 / (2.0 * d as f64));
            Ok(excess(b, bound).max(excess(b, p)).max(excess(rho, b)))
        },
    )?;
    let (p1, b1) = gap(1, q, 0.7, 12)?;
    ctx.value(
        "one variable gives rho twice",
        1e-12,
        rel(p1, 0.7).max(rel(b1, 0.7)),
        format!("{p1} {b1}"),
    );
    ctx.assert(
        "non-unimodular q is rejected",
        poincare_gap(2, real_q(0.5), 1.0, 10).is_err(),
        "",
    );
    Ok(())
}
