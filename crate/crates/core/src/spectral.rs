//! Finite-depth joint ℓ^p spectral radius estimates and the contractivity heuristic.

use serde::Serialize;

use crate::elements::{free_mul, qpoly_mul, FreeElement, QPolynomial};
use crate::error::{Error, Result};
use crate::norms::{free_norm, ln_monomial_weight, qpoly_norm, Family, NormSpec};
use crate::qcombinat::{ln_q_factorial_multi_real, ln_q_factorial_real, MultiIndex, QParam};

/// Cap on the number of words enumerated per depth for generic tuples.
pub const WORD_CAP: usize = 1_000_000;

/// The tuple whose products are measured.
#[derive(Clone, Debug)]
pub enum Generators {
    /// (x_1, …, x_n) in the q-plane algebra; evaluated by grouping words by profile.
    Coordinates {
        n: usize,
        q: QParam,
    },
    /// (ζ_1, …, ζ_n) in the free algebra; evaluated by counting words per switch number.
    FreeCoordinates {
        n: usize,
    },
    QPolys(Vec<QPolynomial>),
    Frees(Vec<FreeElement>),
}

impl Generators {
    pub fn len(&self) -> usize {
        match self {
            Generators::Coordinates { n, .. } | Generators::FreeCoordinates { n } => *n,
            Generators::QPolys(v) => v.len(),
            Generators::Frees(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct TupleSpec {
    pub generators: Generators,
    pub norm: NormSpec,
    /// Aggregation exponent: 1, 2 or `f64::INFINITY`.
    pub p: f64,
    pub max_depth: usize,
}

impl TupleSpec {
    pub fn new(generators: Generators, norm: NormSpec, p: f64, max_depth: usize) -> Result<Self> {
        if max_depth == 0 {
            return Err(Error::param("max_depth must be >= 1"));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::param(format!("exponent p must be >= 1, got {p}")));
        }
        if generators.is_empty() {
            return Err(Error::param("tuple must have at least one generator"));
        }
        match &generators {
            Generators::QPolys(v) => {
                let (n, q) = (v[0].n(), v[0].q());
                if v.iter().any(|a| a.n() != n) {
                    return Err(Error::param("generators must share dimension"));
                }
                if v.iter().any(|a| a.q() != q) {
                    return Err(Error::ParameterMismatch);
                }
            }
            Generators::Frees(v) => {
                let n = v[0].n();
                if v.iter().any(|a| a.n() != n) {
                    return Err(Error::param("generators must share dimension"));
                }
            }
            _ => {}
        }
        Ok(TupleSpec {
            generators,
            norm,
            p,
            max_depth,
        })
    }

    fn with_rho(&self, rho: f64) -> Result<Self> {
        Ok(TupleSpec {
            norm: self.norm.with_rho(rho)?,
            ..self.clone()
        })
    }
}

/// Aggregates p·ln‖a_α‖ over all words into the depth-d value.
struct Aggregate {
    p: f64,
    top: f64,
    acc: f64,
}

impl Aggregate {
    fn new(p: f64) -> Self {
        Aggregate {
            p,
            top: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }

    /// Adds `mult` words each of norm exp(ln_norm).
    fn push(&mut self, ln_norm: f64, ln_mult: f64) {
        if ln_norm == f64::NEG_INFINITY {
            return;
        }
        if self.p.is_infinite() {
            self.top = self.top.max(ln_norm);
            return;
        }
        let x = self.p * ln_norm + ln_mult;
        if x > self.top {
            self.acc = self.acc * (self.top - x).exp() + 1.0;
            self.top = x;
        } else {
            self.acc += (x - self.top).exp();
        }
    }

    fn value(&self, d: usize) -> f64 {
        if self.top == f64::NEG_INFINITY {
            return 0.0;
        }
        if self.p.is_infinite() {
            (self.top / d as f64).exp()
        } else {
            ((self.top + self.acc.ln()) / (self.p * d as f64)).exp()
        }
    }
}

/// (Σ_{|α|=d} ‖a_α‖^p)^{1/(pd)}, or (max_α ‖a_α‖)^{1/d} for p = ∞.
pub fn radius_estimate(tuple: &TupleSpec, d: usize) -> Result<f64> {
    if d == 0 || d > tuple.max_depth {
        return Err(Error::param(format!(
            "depth {d} outside 1..={}",
            tuple.max_depth
        )));
    }
    let mut agg = Aggregate::new(tuple.p);
    let spec = &tuple.norm;
    match &tuple.generators {
        Generators::Coordinates { n, q } => coordinate_sum(*n, *q, spec, tuple.p, d, &mut agg)?,
        Generators::FreeCoordinates { n } => free_coordinate_sum(*n, spec, d, &mut agg)?,
        Generators::QPolys(v) => {
            check_cap(v.len(), d)?;
            let one = QPolynomial::one(v[0].n(), v[0].q());
            enumerate_words(
                &one,
                v,
                d,
                &mut |prod: &QPolynomial| {
                    agg.push(qpoly_norm(prod, spec)?.ln(), 0.0);
                    Ok(())
                },
                &|a, b| qpoly_mul(a, b, None),
            )?;
        }
        Generators::Frees(v) => {
            check_cap(v.len(), d)?;
            let one = FreeElement::one(v[0].n());
            enumerate_words(
                &one,
                v,
                d,
                &mut |prod: &FreeElement| {
                    agg.push(free_norm(prod, spec)?.ln(), 0.0);
                    Ok(())
                },
                &|a, b| free_mul(a, b, None),
            )?;
        }
    }
    Ok(agg.value(d))
}

fn check_cap(n: usize, d: usize) -> Result<()> {
    let count = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if count > WORD_CAP as u128 {
        return Err(Error::limit(format!(
            "{count} words at depth {d} exceeds cap {WORD_CAP}"
        )));
    }
    Ok(())
}

fn enumerate_words<T>(
    prefix: &T,
    gens: &[T],
    left: usize,
    visit: &mut dyn FnMut(&T) -> Result<()>,
    mul: &dyn Fn(&T, &T) -> Result<T>,
) -> Result<()> {
    if left == 0 {
        return visit(prefix);
    }
    for g in gens {
        let next = mul(prefix, g)?;
        enumerate_words(&next, gens, left - 1, visit, mul)?;
    }
    Ok(())
}

/// Coordinate tuple: ‖x_α‖ = |q|^{−m(α)} ‖x^{p(α)}‖, and Σ over a fiber of |q|^{−p m(α)}
/// is the q-multinomial at base |q|^{−p}.
fn coordinate_sum(
    n: usize,
    q: QParam,
    spec: &NormSpec,
    p: f64,
    d: usize,
    agg: &mut Aggregate,
) -> Result<()> {
    if !matches!(
        spec.family,
        Family::PolydiskL1 | Family::PolydiskL2 | Family::Ball | Family::ClassicalBallAm
    ) {
        return Err(Error::FamilyMismatch {
            family: spec.family.name().into(),
            kind: "qpoly".into(),
        });
    }
    let lnrho = spec.rho.ln();
    let lnq = q.ln_abs();
    for k in MultiIndex::all_of_degree(n, d as u32) {
        let ln_mono = ln_monomial_weight(spec.family, &k, q)? + d as f64 * lnrho;
        if p.is_infinite() {
            let worst_phase = (-(k.pair_sum() as f64) * lnq).max(0.0);
            agg.push(ln_mono + worst_phase, 0.0);
        } else {
            let x = (-p * lnq).exp();
            let ln_fiber = ln_q_factorial_real(k.degree(), x) - ln_q_factorial_multi_real(&k, x);
            agg.push(ln_mono, ln_fiber);
        }
    }
    Ok(())
}

/// Free coordinate tuple: there are n(n−1)^s binom(d−1, s) words of length d with s switches.
fn free_coordinate_sum(n: usize, spec: &NormSpec, d: usize, agg: &mut Aggregate) -> Result<()> {
    let lnrho = spec.rho.ln();
    match spec.family {
        Family::FreeTaylor | Family::FreeBallBullet | Family::FreeBallCirc => {
            agg.push(d as f64 * lnrho, d as f64 * (n as f64).ln());
        }
        Family::FreePolydisk => {
            let lntau = spec.tau.ln();
            let smax = if n >= 2 { d - 1 } else { 0 };
            let mut ln_binom = 0.0;
            for s in 0..=smax {
                if s > 0 {
                    ln_binom += ((d - s) as f64 / s as f64).ln();
                }
                let mut ln_count = (n as f64).ln() + ln_binom;
                if s > 0 {
                    ln_count += s as f64 * ((n - 1) as f64).ln();
                }
                agg.push(d as f64 * lnrho + (s + 1) as f64 * lntau, ln_count);
            }
        }
        _ => {
            return Err(Error::FamilyMismatch {
                family: spec.family.name().into(),
                kind: "free".into(),
            })
        }
    }
    Ok(())
}

/// Values for d = 1..=max_depth.
pub fn radius_sequence(tuple: &TupleSpec) -> Result<Vec<f64>> {
    (1..=tuple.max_depth)
        .map(|d| radius_estimate(tuple, d))
        .collect()
}

/// ρ_i = r(1 − 2^{−i}), i = 1..=8.
pub fn rho_grid(r: f64) -> Vec<f64> {
    (1..=8).map(|i| r * (1.0 - 0.5f64.powi(i))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusScan {
    pub rhos: Vec<f64>,
    /// `per_rho[i][d-1]` is the depth-d value at `rhos[i]`.
    pub per_rho: Vec<Vec<f64>>,
    /// Per depth, the maximum over the ρ-grid.
    pub running_max: Vec<f64>,
}

/// Depth sequences over the grid ρ_i = r(1 − 2^{−i}).
pub fn radius_scan(tuple: &TupleSpec, r: f64) -> Result<RadiusScan> {
    let rhos = rho_grid(r);
    let per_rho = rhos
        .iter()
        .map(|&rho| radius_sequence(&tuple.with_rho(rho)?))
        .collect::<Result<Vec<_>>>()?;
    let running_max = (0..tuple.max_depth)
        .map(|d| per_rho.iter().map(|s| s[d]).fold(0.0, f64::max))
        .collect();
    Ok(RadiusScan {
        rhos,
        per_rho,
        running_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Finite-depth heuristic verdict on strict spectral r-contractivity.
#[derive(Clone, Debug, Serialize)]
pub struct ContractiveReport {
    pub verdict: Verdict,
    pub witness_depth: usize,
    pub witness_value: f64,
    pub sequence: Vec<f64>,
}

/// Default relative margin below r required for a pass.
pub const CONTRACTIVE_MARGIN: f64 = 0.02;

/// Uses the p = ∞ sequence regardless of `tuple.p`.
pub fn contractive_check(tuple: &TupleSpec, r: f64, margin: f64) -> Result<ContractiveReport> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::param("r must be positive"));
    }
    let sup = TupleSpec {
        p: f64::INFINITY,
        ..tuple.clone()
    };
    let seq = radius_sequence(&sup)?;
    let tail_start = seq.len().saturating_sub(3);
    let tail = &seq[tail_start..];
    let (mut wd, mut wv) = (seq.len(), seq[seq.len() - 1]);
    let verdict = if tail.iter().all(|&v| v < r * (1.0 - margin)) {
        Verdict::Pass
    } else {
        let over = seq.iter().position(|&v| v > r * (1.0 + 1e-12));
        let nondecreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        match over {
            Some(i) if nondecreasing => {
                wd = i + 1;
                wv = seq[i];
                Verdict::Fail
            }
            _ => Verdict::Inconclusive,
        }
    };
    Ok(ContractiveReport {
        verdict,
        witness_depth: wd,
        witness_value: wv,
        sequence: seq,
    })
}

/// Depth-D ℓ² estimates of the coordinate tuple under the polydisk and ball norms, |q| = 1.
pub fn poincare_gap(n: usize, q: QParam, rho: f64, depth: usize) -> Result<(f64, f64)> {
    if !q.is_unimodular(1e-12) {
        return Err(Error::param("poincare_gap needs |q| = 1"));
    }
    let gens = Generators::Coordinates { n, q };
    let poly = TupleSpec::new(
        gens.clone(),
        NormSpec::simple(Family::PolydiskL1, rho)?,
        2.0,
        depth,
    )?;
    let ball = TupleSpec::new(gens, NormSpec::simple(Family::Ball, rho)?, 2.0, depth)?;
    Ok((
        radius_estimate(&poly, depth)?,
        radius_estimate(&ball, depth)?,
    ))
}
