use std::collections::BTreeMap;

use rand::Rng;

use super::{polar_q, real_q, rel, rel_c, Ctx};
use crate::error::Result;
use crate::norms::classical_ball_sup_coeff;
use crate::qcombinat::{
    fiber_count, fiber_words, inversions, ln_q_factorial_multi_real, ln_q_factorial_real,
    ln_weight_ball, ln_weight_ball_alt, q_multinomial, q_multinomial_ratio, q_pochhammer_inf,
    switch_count, weight_ball, weight_polydisk, word_profile, word_with_inversions, MultiIndex,
    Word, FIBER_CAP,
};
use crate::C64;

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

/// [k+ℓ] multinomial ≥ [k] multinomial · [ℓ] multinomial · q^{σ(k,ℓ)} over the grid.
pub(super) fn chu_vandermonde(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let qs = [0.2, 0.5, 0.9, 1.1, 2.0];
    ctx.param("q", "0.2,0.5,0.9,1.1,2");
    ctx.param("n", "1..=4");
    ctx.param("max_degree", 6);
    let cells: Vec<(usize, f64)> = (1..=4)
        .flat_map(|n| qs.iter().map(move |&q| (n, q)))
        .collect();
    ctx.grid("q-vandermonde inequality", 1e-12, &cells, |&(n, q), _| {
        let qc = C64::new(q, 0.0);
        let mut table = BTreeMap::new();
        for k in MultiIndex::all_up_to_degree(n, 12) {
            let m = mu.f(q_multinomial(&k, qc)?.re);
            table.insert(k, m);
        }
        let small = MultiIndex::all_up_to_degree(n, 6);
        let mut worst = f64::NEG_INFINITY;
        for k in &small {
            for l in &small {
                let lhs = table[&k.add(l)];
                let sigma = crate::deform::sigma(k, l)?;
                let rhs = table[k] * table[l] * q.powi(sigma as i32);
                worst = worst.max((rhs - lhs) / lhs.abs());
            }
        }
        Ok(worst)
    })?;
    let routes: Vec<(MultiIndex, f64)> = MultiIndex::all_up_to_degree(3, 8)
        .into_iter()
        .flat_map(|k| qs.iter().map(move |&q| (k.clone(), q)))
        .collect();
    ctx.grid(
        "polynomial and factorial routes agree",
        1e-12,
        &routes,
        |(k, q), _| {
            let qc = C64::new(*q, 0.0);
            Ok(rel_c(
                mu.c(q_multinomial(k, qc)?),
                q_multinomial_ratio(k, qc),
            ))
        },
    )
}

/// The two closed forms of the ball weight agree.
pub(super) fn ball_weight_forms(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let qs = [0.5, 0.9, 1.0, 1.3, 3.0];
    ctx.param("abs_q", "0.5,0.9,1,1.3,3");
    ctx.param("max_degree", 30);
    let cases: Vec<(MultiIndex, f64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 30))
        .flat_map(|k| qs.iter().map(move |&q| (k.clone(), q)))
        .collect();
    ctx.grid(
        "ball weight forms agree (log-relative)",
        1e-10,
        &cases,
        |(k, q), _| {
            let q = polar_q(*q, 0.7);
            Ok((mu.ln(ln_weight_ball(k, q)) - ln_weight_ball_alt(k, q)).abs())
        },
    )?;
    let examples = [
        (mi(&[1, 1]), 1.0, 0.5f64.sqrt()),
        (mi(&[1, 1]), 0.5, 0.2f64.sqrt()),
        (mi(&[4, 0, 0]), 0.3, 1.0),
        (mi(&[0, 5]), 2.0, 1.0),
        (mi(&[2, 1]), 1.0, (2.0f64 / 6.0).sqrt()),
    ];
    ctx.grid(
        "ball weight examples",
        1e-12,
        &examples,
        |(k, q, expect), _| Ok(rel(mu.f(weight_ball(k, real_q(*q))), *expect)),
    )
}

/// (q;q)_∞^n ≤ [k]!/[|k|]! ≤ 1 for 0 < q < 1.
pub(super) fn multinomial_bounds(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("q", "0.2,0.5,0.9");
    ctx.param("max_degree", 20);
    let cases: Vec<(MultiIndex, f64)> = (1..=4)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 20))
        .flat_map(|k| [0.2, 0.5, 0.9].into_iter().map(move |q| (k.clone(), q)))
        .collect();
    ctx.grid("euler product sandwich", 1e-12, &cases, |(k, q), _| {
        let qc = C64::new(*q, 0.0);
        let euler = q_pochhammer_inf(qc, qc, 1e-16)?.value.re.powi(k.n() as i32);
        let ratio =
            mu.f((ln_q_factorial_multi_real(k, *q) - ln_q_factorial_real(k.degree(), *q)).exp());
        Ok(((ratio - 1.0) / 1.0).max((euler - ratio) / euler))
    })
}

/// b_k = (k^k/|k|^{|k|})^{1/2} r^{|k|} against a product oracle and a direct maximization,
/// plus the Stirling-ratio trend for k = (m, m).
pub(super) fn stirling(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    let sup = move |k: &MultiIndex, r: f64| mu.f(classical_ball_sup_coeff(k, r));
    let cases: Vec<(MultiIndex, f64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 12))
        .flat_map(|k| [0.5, 1.0, 2.0].into_iter().map(move |r| (k.clone(), r)))
        .collect();
    ctx.grid(
        "sup coefficient vs product oracle",
        1e-12,
        &cases,
        |(k, r), _| {
            let d = k.degree() as f64;
            let mut prod = r.powi(d as i32);
            for &e in k.entries() {
                if e > 0 {
                    prod *= (e as f64 / d).powf(e as f64 / 2.0);
                }
            }
            Ok(rel(sup(k, *r), prod))
        },
    )?;
    // Golden-section search of t^{a/2} (r² − t)^{b/2} over [0, r²].
    let pairs: Vec<(u32, u32, f64)> = (1..=6)
        .flat_map(|a| (1..=6).map(move |b| (a, b)))
        .flat_map(|(a, b)| [0.7, 1.0, 1.8].into_iter().map(move |r| (a, b, r)))
        .collect();
    ctx.grid(
        "sup coefficient vs numeric maximization",
        1e-6,
        &pairs,
        |&(a, b, r), _| {
            let r2 = r * r;
            let f = |t: f64| 0.5 * (a as f64 * t.ln() + b as f64 * (r2 - t).ln());
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (0.0, r2);
            for _ in 0..200 {
                let x1 = hi - g * (hi - lo);
                let x2 = lo + g * (hi - lo);
                if f(x1) < f(x2) {
                    lo = x1;
                } else {
                    hi = x2;
                }
            }
            Ok(rel(sup(&mi(&[a, b]), r), f(0.5 * (lo + hi)).exp()))
        },
    )?;
    ctx.random(
        "random sphere points stay below the sup",
        0.0,
        300,
        |_, rng| {
            let k = MultiIndex::new((0..3).map(|_| rng.gen_range(0..5)).collect());
            let t: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = t.iter().sum();
            let val: f64 = k
                .entries()
                .iter()
                .zip(&t)
                .map(|(&e, x)| 0.5 * e as f64 * (x / s).ln())
                .sum();
            Ok((val.exp() - sup(&k, 1.0) * (1.0 + 1e-12)).max(0.0))
        },
    )?;
    let ratio = |m: u32| {
        let k = mi(&[m, m]);
        let lnfact = |x: u64| (2..=x).map(|j| (j as f64).ln()).sum::<f64>();
        let ln_ratio = 2.0 * lnfact(m as u64) - lnfact(2 * m as u64);
        let ln_b2 = 2.0 * sup(&k, 1.0).ln();
        ((ln_ratio - ln_b2) / (2.0 * k.degree() as f64)).exp()
    };
    let (v25, v50, v100) = (ratio(25), ratio(50), ratio(100));
    ctx.param("ratio_m25", v25);
    ctx.param("ratio_m100", v100);
    ctx.value(
        "ratio at m = 100 within 0.1 of 1",
        0.1,
        (v100 - 1.0).abs(),
        format!("{v100}"),
    );
    ctx.assert(
        "ratio approaches 1",
        (v100 - 1.0).abs() <= (v25 - 1.0).abs(),
        format!("m=25: {v25}, m=50: {v50}, m=100: {v100}"),
    );
    Ok(())
}

/// w_q(k) equals the smallest |q|^{m(α)} over the fiber of k.
pub(super) fn polydisk_weight_minimum(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("abs_q", "0.3,0.5,0.9,1,1.5");
    ctx.param("max_degree", 7);
    let cases: Vec<(MultiIndex, f64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 7))
        .flat_map(|k| {
            [0.3, 0.5, 0.9, 1.0, 1.5]
                .into_iter()
                .map(move |q| (k.clone(), q))
        })
        .collect();
    ctx.grid("weight equals fiber minimum", 1e-12, &cases, |(k, q), _| {
        let min = fiber_words(k, FIBER_CAP)?
            .iter()
            .map(|w| q.powi(inversions(w) as i32))
            .fold(f64::INFINITY, f64::min);
        Ok(rel(mu.f(weight_polydisk(k, polar_q(*q, 1.1))), min))
    })?;
    let examples = [
        (mi(&[1, 1]), 0.5, 0.5),
        (mi(&[2, 1]), 2.0, 1.0),
        (mi(&[2, 3, 1]), 0.5, 0.5f64.powi(11)),
    ];
    ctx.grid("weight examples", 1e-15, &examples, |(k, q, e), _| {
        Ok(rel(mu.f(weight_polydisk(k, real_q(*q))), *e))
    })
}

/// Σ_α |q|^{−2m(α)} over the fiber against the closed form, plus the
/// generating-function identity Σ_α q^{m(α)} = [|k|]_q!/[k]_q!.
pub(super) fn fiber_weight_sum(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("abs_q", "0.5,2");
    ctx.param("max_degree", 8);
    let cases: Vec<(MultiIndex, f64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 8))
        .flat_map(|k| [0.5, 2.0].into_iter().map(move |q| (k.clone(), q)))
        .collect();
    ctx.grid(
        "minimal circ norm vs closed form",
        1e-10,
        &cases,
        |(k, q), _| {
            let x = q.powi(-2);
            let total: f64 = fiber_words(k, FIBER_CAP)?
                .iter()
                .map(|w| x.powi(inversions(w) as i32))
                .sum();
            let closed = mu.f((0.5
                * (ln_q_factorial_multi_real(k, x) - ln_q_factorial_real(k.degree(), x)))
            .exp());
            Ok(
                rel(closed, total.powf(-0.5))
                    .max(rel(weight_ball(k, real_q(*q)), total.powf(-0.5))),
            )
        },
    )?;
    let x = 4.0f64;
    let example = mu
        .f((0.5 * (ln_q_factorial_multi_real(&mi(&[1, 1]), x) - ln_q_factorial_real(2, x))).exp());
    ctx.value(
        "k = (1,1), |q| = 0.5 gives 5^(-1/2)",
        1e-15,
        rel(example, 0.2f64.sqrt()),
        format!("{example}"),
    );
    let qs = [
        C64::new(0.3, 0.0),
        C64::new(0.5, 0.0),
        C64::new(1.7, 0.0),
        C64::from_polar(1.0, std::f64::consts::PI / 5.0),
    ];
    let gen_cases: Vec<(MultiIndex, C64)> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 8))
        .flat_map(|k| qs.into_iter().map(move |q| (k.clone(), q)))
        .collect();
    ctx.grid(
        "inversion generating function",
        1e-10,
        &gen_cases,
        |(k, q), _| {
            let brute: C64 = fiber_words(k, FIBER_CAP)?
                .iter()
                .map(|w| q.powu(inversions(w) as u32))
                .sum();
            Ok(rel_c(q_multinomial_ratio(k, *q), brute).max(rel_c(q_multinomial(k, *q)?, brute)))
        },
    )?;
    let counts: Vec<MultiIndex> = (1..=3)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 8))
        .collect();
    ctx.grid("fiber size equals multinomial", 0.0, &counts, |k, _| {
        let words = fiber_words(k, FIBER_CAP)?;
        let profiles_ok = words
            .iter()
            .all(|w| word_profile(w, k.n()).is_ok_and(|p| &p == k));
        Ok(if words.len() as u64 == fiber_count(k)? && profiles_ok {
            0.0
        } else {
            1.0
        })
    })
}

/// The sweep procedure returns a word with the requested profile and inversion number
/// and at most n + 2 switches.
pub(super) fn inversion_procedure(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
    ctx.param("n", "1..=4");
    ctx.param("max_degree", 7);
    let cases: Vec<(MultiIndex, u64)> = (1..=4)
        .flat_map(|n| MultiIndex::all_up_to_degree(n, 7))
        .flat_map(|k| (0..=k.pair_sum()).map(move |m| (k.clone(), m)))
        .collect();
    ctx.grid("procedure postconditions", 0.0, &cases, |(k, m), _| {
        let w = word_with_inversions(k, *m)?;
        let ok = word_profile(&w, k.n())? == *k
            && mu.int(inversions(&w)) == *m
            && switch_count(&w) <= k.n() as i64 + 2;
        Ok(if ok { 0.0 } else { 1.0 })
    })?;
    let examples = [
        (mi(&[1, 1]), 0, vec![1, 2]),
        (mi(&[1, 1]), 1, vec![2, 1]),
        (mi(&[2, 2]), 4, vec![2, 2, 1, 1]),
    ];
    ctx.grid("procedure examples", 0.0, &examples, |(k, m, expect), _| {
        let w = word_with_inversions(k, *m)?;
        Ok(
            if w == Word::new(expect.clone()) && mu.int(inversions(&w)) == *m {
                0.0
            } else {
                1.0
            },
        )
    })?;
    let k = mi(&[1, 1]);
    ctx.assert(
        "out-of-range target rejected",
        word_with_inversions(&k, 2).is_err(),
        "k = (1,1), m = 2",
    );
    Ok(())
}

/// Adjacent swaps performed by bubble sort.
fn bubble_swaps(w: &Word) -> u64 {
    let mut v = w.letters().to_vec();
    let mut swaps = 0;
    for end in (1..v.len()).rev() {
        for i in 0..end {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                swaps += 1;
            }
        }
    }
    swaps
}

/// m(α) ≤ Σ_{i<j} p_i(α) p_j(α), with equality on reversed sorted words.
pub(super) fn inversion_bound(ctx: &mut Ctx) -> Result<()> {
    let mu = ctx.mutation();
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
    ctx.grid(
        "inversions bounded by pair sum",
        0.0,
        &words,
        |(n, w), _| {
            let m = mu.int(inversions(w));
            let s = word_profile(w, *n)?.pair_sum();
            Ok(m as f64 - s as f64)
        },
    )?;
    ctx.grid(
        "inversions equal bubble-sort swaps",
        0.0,
        &words,
        |(_, w), _| Ok((mu.int(inversions(w)) as f64 - bubble_swaps(w) as f64).abs()),
    )?;
    let examples = [
        (vec![1, 2, 2, 3], 0u64),
        (vec![2, 1], 1),
        (vec![2, 1, 2, 1], 3),
    ];
    ctx.grid("inversion examples", 0.0, &examples, |(w, m), _| {
        Ok((mu.int(inversions(&Word::new(w.clone()))) as f64 - *m as f64).abs())
    })
}
