//! Named verification suites.
//!
//! Each suite runs a grid of checks. A check evaluates a badness value per case
//! (a relative error, or an inequality excess) and passes when every value is at
//! most its limit. Cases run on the rayon pool; results are reduced in case order,
//! and random cases draw from per-case ChaCha8 streams, so reports depend only on
//! the seed.
//!
//! [`SuiteConfig::perturb`] multiplies one formula's output by 1 + 1e-6 (integer
//! formulas are shifted by one) inside the suite that tests it. A correct build
//! must then fail that suite.

mod algebra;
mod combinat;
mod deform;
mod fock;
mod norms;
mod spectral;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcombinat::QParam;
use crate::random::{self, Stream};
use crate::{QPolynomial, C64};

/// Relative size of a float perturbation.
pub const PERTURBATION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    QMultinomial,
    BallWeight,
    MultinomialRatio,
    BallNorm,
    FlipMap,
    ClassicalSupCoefficient,
    PolydiskWeight,
    ProductRule,
    NormalOrderMap,
    BallLiftWeights,
    FiberWeightSum,
    InversionProcedure,
    InversionCount,
    Omega,
    WordNormalForm,
    VacuumImage,
    VacuumNorm,
    GeneratorNorm,
    PolydiskRadius,
    BallRadius,
    StarProduct,
    QuantizationDefect,
    FormalLift,
    BlowupProduct,
    LambdaConstant,
    RewriteNormalOrder,
}

/// (formula, name, suite that must fail when it is perturbed, integer-valued).
const FORMULAS: [(Formula, &str, &str, bool); 26] = [
    (
        Formula::QMultinomial,
        "q-multinomial",
        "chu-vandermonde",
        false,
    ),
    (Formula::BallWeight, "ball-weight", "lemma-3-13", false),
    (
        Formula::MultinomialRatio,
        "multinomial-ratio",
        "lemma-4-1",
        false,
    ),
    (Formula::BallNorm, "ball-norm", "theorem-4-2", false),
    (Formula::FlipMap, "flip-map", "prop-3-15-isometry", false),
    (
        Formula::ClassicalSupCoefficient,
        "classical-sup-coefficient",
        "stirling-3-4",
        false,
    ),
    (Formula::PolydiskWeight, "polydisk-weight", "eq-6-10", false),
    (Formula::ProductRule, "product-rule", "submult-all", false),
    (
        Formula::NormalOrderMap,
        "normal-order-map",
        "quotient-contraction",
        false,
    ),
    (
        Formula::BallLiftWeights,
        "ball-lift-weights",
        "lift-attainment",
        false,
    ),
    (
        Formula::FiberWeightSum,
        "fiber-weight-sum",
        "lemma-7-9",
        false,
    ),
    (
        Formula::InversionProcedure,
        "inversion-procedure",
        "lemma-8-5",
        true,
    ),
    (
        Formula::InversionCount,
        "inversion-count",
        "lemma-8-6",
        true,
    ),
    (Formula::Omega, "omega", "lemma-8-10", true),
    (
        Formula::WordNormalForm,
        "word-normal-form",
        "laurent-word-identity",
        true,
    ),
    (
        Formula::VacuumImage,
        "vacuum-image",
        "fock-lemma-5-2",
        false,
    ),
    (
        Formula::VacuumNorm,
        "vacuum-norm",
        "fock-sandwich-5-4",
        false,
    ),
    (
        Formula::GeneratorNorm,
        "generator-norm",
        "fock-xnorm-limit",
        false,
    ),
    (
        Formula::PolydiskRadius,
        "polydisk-radius",
        "spectral-examples",
        false,
    ),
    (Formula::BallRadius, "ball-radius", "poincare-gap", false),
    (
        Formula::StarProduct,
        "star-product",
        "star-associativity",
        false,
    ),
    (
        Formula::QuantizationDefect,
        "quantization-defect",
        "star-defect-8-23",
        false,
    ),
    (
        Formula::FormalLift,
        "formal-lift",
        "formal-lift-8-39",
        false,
    ),
    (
        Formula::BlowupProduct,
        "blowup-product",
        "remark-3-12-blowup",
        false,
    ),
    (
        Formula::LambdaConstant,
        "lambda-constant",
        "lambda-2-1",
        false,
    ),
    (
        Formula::RewriteNormalOrder,
        "rewrite-normal-order",
        "normal-order-rewrite",
        false,
    ),
];

impl Formula {
    pub fn all() -> impl Iterator<Item = Formula> {
        FORMULAS.iter().map(|e| e.0)
    }

    fn entry(self) -> &'static (Formula, &'static str, &'static str, bool) {
        FORMULAS
            .iter()
            .find(|e| e.0 == self)
            .expect("every formula is tabulated")
    }

    pub fn name(self) -> &'static str {
        self.entry().1
    }

    /// The suite that exercises this formula.
    pub fn suite(self) -> &'static str {
        self.entry().2
    }

    pub fn is_integer(self) -> bool {
        self.entry().3
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::all()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown formula `{s}`")))
    }
}

/// Suite names in catalog order, followed by the rewriting-oracle suite.
pub const SUITES: [&str; 26] = [
    "chu-vandermonde",
    "lemma-3-13",
    "lemma-4-1",
    "theorem-4-2",
    "prop-3-15-isometry",
    "stirling-3-4",
    "eq-6-10",
    "submult-all",
    "quotient-contraction",
    "lift-attainment",
    "lemma-7-9",
    "lemma-8-5",
    "lemma-8-6",
    "lemma-8-10",
    "laurent-word-identity",
    "fock-lemma-5-2",
    "fock-sandwich-5-4",
    "fock-xnorm-limit",
    "spectral-examples",
    "poincare-gap",
    "star-associativity",
    "star-defect-8-23",
    "formal-lift-8-39",
    "remark-3-12-blowup",
    "lambda-2-1",
    "normal-order-rewrite",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub perturb: Option<Formula>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            perturb: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Largest badness over the cases.
    pub worst: f64,
    pub limit: f64,
    /// The case attaining `worst`.
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    pub wall_ms: u128,
}

/// The perturbation active inside one suite, if any.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mutation {
    active: bool,
}

impl Mutation {
    pub(crate) fn f(self, x: f64) -> f64 {
        if self.active {
            x * (1.0 + PERTURBATION)
        } else {
            x
        }
    }

    pub(crate) fn c(self, z: C64) -> C64 {
        if self.active {
            z * (1.0 + PERTURBATION)
        } else {
            z
        }
    }

    /// Additive form for log-domain values.
    pub(crate) fn ln(self, x: f64) -> f64 {
        if self.active {
            x + PERTURBATION.ln_1p()
        } else {
            x
        }
    }

    pub(crate) fn int(self, m: u64) -> u64 {
        m + u64::from(self.active)
    }

    pub(crate) fn int_signed(self, m: i64) -> i64 {
        m + i64::from(self.active)
    }

    pub(crate) fn poly(self, a: &QPolynomial) -> QPolynomial {
        if self.active {
            a.scale(C64::new(1.0 + PERTURBATION, 0.0))
        } else {
            a.clone()
        }
    }
}

pub(crate) struct Ctx {
    seed: u64,
    mutation: Mutation,
    params: BTreeMap<String, String>,
    checks: Vec<CheckOutcome>,
}

impl Ctx {
    pub(crate) fn mutation(&self) -> Mutation {
        self.mutation
    }

    pub(crate) fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    /// Evaluates `f` on every case in parallel.
    pub(crate) fn grid<T, F>(&mut self, name: &str, limit: f64, cases: &[T], f: F) -> Result<()>
    where
        T: fmt::Debug + Sync,
        F: Fn(&T, &mut Stream) -> Result<f64> + Sync,
    {
        let tag = random::tag(name);
        let seed = self.seed;
        let values = cases
            .par_iter()
            .enumerate()
            .map(|(i, c)| f(c, &mut random::stream(seed, tag, i as u64)))
            .collect::<Result<Vec<f64>>>()?;
        let mut worst = f64::NEG_INFINITY;
        let mut at = None;
        for (i, &v) in values.iter().enumerate() {
            let v = if v.is_nan() { f64::INFINITY } else { v };
            if v > worst {
                worst = v;
                at = Some(i);
            }
        }
        let detail = at.map(|i| format!("{:?}", cases[i])).unwrap_or_default();
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed: values.iter().all(|v| *v <= limit),
            cases: cases.len(),
            worst: if values.is_empty() { 0.0 } else { worst },
            limit,
            detail,
        });
        Ok(())
    }

    /// `count` random cases, numbered from zero.
    pub(crate) fn random<F>(&mut self, name: &str, limit: f64, count: usize, f: F) -> Result<()>
    where
        F: Fn(usize, &mut Stream) -> Result<f64> + Sync,
    {
        let cases: Vec<usize> = (0..count).collect();
        self.grid(name, limit, &cases, |&i, rng| f(i, rng))
    }

    /// A single deterministic value.
    pub(crate) fn value(
        &mut self,
        name: &str,
        limit: f64,
        badness: f64,
        detail: impl Into<String>,
    ) {
        let v = if badness.is_nan() {
            f64::INFINITY
        } else {
            badness
        };
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed: v <= limit,
            cases: 1,
            worst: v,
            limit,
            detail: detail.into(),
        });
    }

    /// Passes iff `cond` holds.
    pub(crate) fn assert(&mut self, name: &str, cond: bool, detail: impl Into<String>) {
        self.value(name, 0.0, if cond { 0.0 } else { 1.0 }, detail);
    }
}

/// |a − b| / |b|, or |a − b| when b = 0.
pub(crate) fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else {
        d / b.abs()
    }
}

pub(crate) fn rel_c(a: C64, b: C64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Relative excess of `lhs` over `rhs`; positive when lhs ≤ rhs fails.
pub(crate) fn excess(lhs: f64, rhs: f64) -> f64 {
    let s = rhs.abs().max(lhs.abs());
    if s == 0.0 {
        0.0
    } else {
        (lhs - rhs) / s
    }
}

/// Largest coefficient difference scaled by the largest coefficient of `b` (at least 1).
pub(crate) fn poly_rel(a: &QPolynomial, b: &QPolynomial) -> f64 {
    let scale = b.terms().values().map(|c| c.norm()).fold(1.0, f64::max);
    a.max_coeff_diff(b) / scale
}

pub(crate) fn real_q(q: f64) -> QParam {
    QParam::real(q).expect("suite parameters are nonzero")
}

pub(crate) fn polar_q(r: f64, theta: f64) -> QParam {
    QParam::new(C64::from_polar(r, theta)).expect("suite parameters are nonzero")
}

fn dispatch(name: &str, ctx: &mut Ctx) -> Result<()> {
    match name {
        "chu-vandermonde" => combinat::chu_vandermonde(ctx),
        "lemma-3-13" => combinat::ball_weight_forms(ctx),
        "lemma-4-1" => combinat::multinomial_bounds(ctx),
        "stirling-3-4" => combinat::stirling(ctx),
        "eq-6-10" => combinat::polydisk_weight_minimum(ctx),
        "lemma-7-9" => combinat::fiber_weight_sum(ctx),
        "lemma-8-5" => combinat::inversion_procedure(ctx),
        "lemma-8-6" => combinat::inversion_bound(ctx),
        "theorem-4-2" => norms::ball_polydisk_sandwich(ctx),
        "submult-all" => norms::submultiplicativity(ctx),
        "remark-3-12-blowup" => norms::blowup(ctx),
        "lambda-2-1" => norms::lambda_comparison(ctx),
        "lemma-8-10" => norms::omega_subadditivity(ctx),
        "prop-3-15-isometry" => algebra::flip_isometry(ctx),
        "quotient-contraction" => algebra::quotient_contraction(ctx),
        "lift-attainment" => algebra::lift_attainment(ctx),
        "laurent-word-identity" => algebra::laurent_words(ctx),
        "normal-order-rewrite" => algebra::normal_order_rewrite(ctx),
        "fock-lemma-5-2" => fock::vacuum_images(ctx),
        "fock-sandwich-5-4" => fock::sandwich(ctx),
        "fock-xnorm-limit" => fock::generator_limit(ctx),
        "spectral-examples" => spectral::examples(ctx),
        "poincare-gap" => spectral::poincare(ctx),
        "star-associativity" => deform::associativity(ctx),
        "star-defect-8-23" => deform::defect(ctx),
        "formal-lift-8-39" => deform::formal_lift(ctx),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// Runs one named suite. Resource-limit breaches surface as errors, not failures.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let suite = SUITES
        .iter()
        .copied()
        .find(|s| *s == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let active = config.perturb.is_some_and(|f| f.suite() == suite);
    let mut ctx = Ctx {
        seed: config.seed,
        mutation: Mutation { active },
        params: BTreeMap::new(),
        checks: Vec::new(),
    };
    ctx.param("seed", config.seed);
    if let Some(f) = config.perturb {
        ctx.param("perturb", f);
    }
    let start = Instant::now();
    dispatch(suite, &mut ctx)?;
    let passed = ctx.checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: suite.to_string(),
        params: ctx.params,
        checks: ctx.checks,
        passed,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Every suite in [`SUITES`] order.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_map_onto_suites() {
        for (suite, f) in SUITES.iter().zip(Formula::all()) {
            assert_eq!(f.suite(), *suite);
            assert_eq!(f.name().parse::<Formula>().unwrap(), f);
        }
        assert!("nope".parse::<Formula>().is_err());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        let e = run_suite("no-such", &SuiteConfig::default()).unwrap_err();
        assert!(matches!(e, Error::UnknownSuite(_)));
    }

    #[test]
    fn badness_helpers() {
        assert_eq!(rel(2.0, 1.0), 1.0);
        assert_eq!(rel(1e-3, 0.0), 1e-3);
        assert!(excess(1.0, 2.0) < 0.0);
        assert!(excess(2.0, 1.0) > 0.0);
        assert_eq!(excess(0.0, 0.0), 0.0);
    }
}
