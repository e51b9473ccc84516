//! Norm families on truncated elements, the clipped z-exponent ω(k, p), and
//! comparison constants between weighted ℓ^p sequence norms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::deform::HSeriesElement;
use crate::elements::{Element, FreeElement, LaurentElement, QPolynomial};
use crate::error::{Error, Result};
use crate::qcombinat::{
    ln_weight_ball, ln_weight_polydisk, switch_count, word_profile, MultiIndex, QParam,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    PolydiskL1,
    PolydiskL2,
    Ball,
    ClassicalBallAm,
    FreeTaylor,
    FreePolydisk,
    FreeBallBullet,
    FreeBallCirc,
    LaurentDnr,
    FormalN,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::PolydiskL1,
        Family::PolydiskL2,
        Family::Ball,
        Family::ClassicalBallAm,
        Family::FreeTaylor,
        Family::FreePolydisk,
        Family::FreeBallBullet,
        Family::FreeBallCirc,
        Family::LaurentDnr,
        Family::FormalN,
    ];

    /// Families whose norms are submultiplicative on their algebra.
    pub const SUBMULTIPLICATIVE: [Family; 7] = [
        Family::PolydiskL1,
        Family::Ball,
        Family::FreeTaylor,
        Family::FreePolydisk,
        Family::FreeBallBullet,
        Family::FreeBallCirc,
        Family::LaurentDnr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PolydiskL1 => "polydisk",
            Family::PolydiskL2 => "polydisk-l2",
            Family::Ball => "ball",
            Family::ClassicalBallAm => "classical-ball",
            Family::FreeTaylor => "free-taylor",
            Family::FreePolydisk => "free-polydisk",
            Family::FreeBallBullet => "free-ball-bullet",
            Family::FreeBallCirc => "free-ball-circ",
            Family::LaurentDnr => "laurent",
            Family::FormalN => "formal",
        }
    }

    pub fn needs_tau(self) -> bool {
        matches!(self, Family::FreePolydisk | Family::LaurentDnr)
    }

    pub fn needs_order(self) -> bool {
        matches!(self, Family::FormalN)
    }

    /// The element kind this family measures.
    pub fn kind(self) -> &'static str {
        match self {
            Family::PolydiskL1 | Family::PolydiskL2 | Family::Ball | Family::ClassicalBallAm => {
                "qpoly"
            }
            Family::FreeTaylor
            | Family::FreePolydisk
            | Family::FreeBallBullet
            | Family::FreeBallCirc => "free",
            Family::LaurentDnr => "laurent",
            Family::FormalN => "hseries",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown norm family `{s}`")))
    }
}

/// A norm family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec {
    pub family: Family,
    pub rho: f64,
    /// Switch or z-exponent base; 1 for families that ignore it.
    pub tau: f64,
    /// Truncation order in the formal parameter; 0 for families that ignore it.
    pub order: u32,
}

impl NormSpec {
    pub fn new(family: Family, rho: f64, tau: Option<f64>, order: Option<u32>) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::param(format!(
                "rho must be positive and finite, got {rho}"
            )));
        }
        let tau = match (family.needs_tau(), tau) {
            (true, Some(t)) if t >= 1.0 && t.is_finite() => t,
            (true, Some(t)) => return Err(Error::param(format!("tau must be >= 1, got {t}"))),
            (true, None) => return Err(Error::param(format!("family {family} needs tau"))),
            (false, _) => 1.0,
        };
        let order = match (family.needs_order(), order) {
            (true, Some(n)) => n,
            (true, None) => return Err(Error::param(format!("family {family} needs an order"))),
            (false, _) => 0,
        };
        Ok(NormSpec {
            family,
            rho,
            tau,
            order,
        })
    }

    /// Shorthand for families with ρ as their only parameter.
    pub fn simple(family: Family, rho: f64) -> Result<Self> {
        Self::new(family, rho, None, None)
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.family, rho, Some(self.tau), Some(self.order))
    }
}

fn mismatch(spec: &NormSpec, kind: &str) -> Error {
    Error::FamilyMismatch {
        family: spec.family.name().into(),
        kind: kind.into(),
    }
}

/// ln of ‖x^k‖ / ρ^{|k|} for the q-plane families.
pub fn ln_monomial_weight(family: Family, k: &MultiIndex, q: QParam) -> Result<f64> {
    match family {
        Family::PolydiskL1 | Family::PolydiskL2 => Ok(ln_weight_polydisk(k, q)),
        Family::Ball => Ok(ln_weight_ball(k, q)),
        Family::ClassicalBallAm => Ok(0.5 * ln_classical_ratio(k)),
        other => Err(Error::FamilyMismatch {
            family: other.name().into(),
            kind: "qpoly".into(),
        }),
    }
}

/// ln(k! / |k|!).
fn ln_classical_ratio(k: &MultiIndex) -> f64 {
    let lnfact = |m: u64| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    k.entries().iter().map(|&e| lnfact(e as u64)).sum::<f64>() - lnfact(k.degree())
}

pub fn qpoly_norm(a: &QPolynomial, spec: &NormSpec) -> Result<f64> {
    let lnrho = spec.rho.ln();
    let q = a.q();
    match spec.family {
        Family::PolydiskL1 | Family::Ball | Family::ClassicalBallAm => {
            let mut acc = 0.0;
            for (k, c) in a.terms() {
                let lw = ln_monomial_weight(spec.family, k, q)?;
                acc += (c.norm().ln() + lw + k.degree() as f64 * lnrho).exp();
            }
            Ok(acc)
        }
        Family::PolydiskL2 => {
            let mut acc = 0.0;
            for (k, c) in a.terms() {
                let lw = ln_weight_polydisk(k, q);
                acc += (2.0 * (c.norm().ln() + lw + k.degree() as f64 * lnrho)).exp();
            }
            Ok(acc.sqrt())
        }
        _ => Err(mismatch(spec, "qpoly")),
    }
}

pub fn free_norm(f: &FreeElement, spec: &NormSpec) -> Result<f64> {
    let lnrho = spec.rho.ln();
    match spec.family {
        Family::FreeTaylor => Ok(f
            .terms()
            .iter()
            .map(|(w, c)| c.norm() * (w.len() as f64 * lnrho).exp())
            .sum()),
        Family::FreePolydisk => {
            let lntau = spec.tau.ln();
            Ok(f.terms()
                .iter()
                .map(|(w, c)| {
                    let s = switch_count(w) + 1;
                    c.norm() * (w.len() as f64 * lnrho + s as f64 * lntau).exp()
                })
                .sum())
        }
        Family::FreeBallBullet => {
            let mut by_len: BTreeMap<usize, f64> = BTreeMap::new();
            for (w, c) in f.terms() {
                *by_len.entry(w.len()).or_default() += c.norm_sqr();
            }
            Ok(by_len
                .into_iter()
                .map(|(d, s)| s.sqrt() * (d as f64 * lnrho).exp())
                .sum())
        }
        Family::FreeBallCirc => {
            let mut by_profile: BTreeMap<MultiIndex, f64> = BTreeMap::new();
            for (w, c) in f.terms() {
                *by_profile.entry(word_profile(w, f.n())?).or_default() += c.norm_sqr();
            }
            Ok(by_profile
                .into_iter()
                .map(|(k, s)| s.sqrt() * (k.degree() as f64 * lnrho).exp())
                .sum())
        }
        _ => Err(mismatch(spec, "free")),
    }
}

pub fn laurent_norm(a: &LaurentElement, spec: &NormSpec) -> Result<f64> {
    if spec.family != Family::LaurentDnr {
        return Err(mismatch(spec, "laurent"));
    }
    let lnrho = spec.rho.ln();
    let lntau = spec.tau.ln();
    Ok(a.terms()
        .iter()
        .map(|((k, p), c)| {
            let w = omega(k, *p).unsigned_abs() as f64;
            c.norm() * (k.degree() as f64 * lnrho + w * lntau).exp()
        })
        .sum())
}

/// Σ_{p ≤ N} Σ_k |c_{p,k}| ρ^{|k|}.
pub fn hseries_norm(f: &HSeriesElement, spec: &NormSpec) -> Result<f64> {
    if spec.family != Family::FormalN {
        return Err(mismatch(spec, "hseries"));
    }
    let lnrho = spec.rho.ln();
    Ok(f.terms()
        .iter()
        .filter(|((p, _), _)| *p <= spec.order)
        .map(|((_, k), c)| c.norm() * (k.degree() as f64 * lnrho).exp())
        .sum())
}

pub fn norm(element: &Element, spec: &NormSpec) -> Result<f64> {
    match element {
        Element::QPoly(a) => qpoly_norm(a, spec),
        Element::Free(f, _) => free_norm(f, spec),
        Element::Laurent(a) => laurent_norm(a, spec),
        Element::HSeries(f) => hseries_norm(f, spec),
    }
}

/// Clipped z-exponent: p if p ≥ 0, 0 if p < 0 ≤ p + S, and p + S otherwise,
/// where S = Σ_{i<j} k_i k_j.
pub fn omega(k: &MultiIndex, p: i64) -> i64 {
    let top = p + k.pair_sum() as i64;
    if p >= 0 {
        p
    } else if top >= 0 {
        0
    } else {
        top
    }
}

/// Coefficient bound b_k = (k^k / |k|^{|k|})^{1/2} r^{|k|} for the classical ball of radius r
/// (the supremum of |z^k| over it), with 0^0 = 1.
pub fn classical_ball_sup_coeff(k: &MultiIndex, r: f64) -> f64 {
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let d = k.degree() as f64;
    let ln = k.entries().iter().map(|&e| xlnx(e as f64)).sum::<f64>() - xlnx(d);
    (0.5 * ln + d * r.ln()).exp()
}

/// sup_d binom(d+n−1, n−1)^{1/2} (ρ/ρ₁)^d, the constant in ‖·‖^∘_ρ ≤ C ‖·‖^•_{ρ₁}.
pub fn bullet_circ_constant(n: usize, rho: f64, rho1: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < rho1) {
        return Err(Error::param("need 0 < rho < rho1"));
    }
    let ratio = (rho / rho1).ln();
    let mut best = 0.0f64;
    let mut ln_binom = 0.0f64;
    for d in 0u64.. {
        if d > 0 {
            ln_binom += ((d + n as u64 - 1) as f64 / d as f64).ln();
        }
        let term = 0.5 * ln_binom + d as f64 * ratio;
        best = best.max(term);
        // Past the peak the log-term is concave and strictly decreasing.
        if d > 4 && term < best - 40.0 {
            break;
        }
        if d > 10_000_000 {
            return Err(Error::limit("bullet/circ constant did not settle"));
        }
    }
    Ok(best.exp())
}

/// Outcome of comparing weighted ℓ^s and ℓ^p sequence norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaComparison {
    pub bound_holds: bool,
    pub constant: f64,
    pub norm_s_rho: f64,
    pub norm_p_rho: f64,
    pub norm_s_tau: f64,
}

/// (Σ_k (x_k ρ^{|k|})^p)^{1/p}, or the supremum for p = ∞.
pub fn weighted_lp(values: &BTreeMap<MultiIndex, f64>, p: f64, rho: f64) -> f64 {
    let scaled = values.iter().map(|(k, &x)| x * rho.powi(k.degree() as i32));
    if p.is_infinite() {
        scaled.fold(0.0, f64::max)
    } else {
        scaled.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Checks ‖x‖^{(s)}_ρ ≤ ‖x‖^{(p)}_ρ ≤ (τ^ℓ/(τ^ℓ−ρ^ℓ))^{n/ℓ} ‖x‖^{(s)}_τ with ℓ = (1/p − 1/s)^{−1}.
pub fn lambda_p_compare(
    values: &BTreeMap<MultiIndex, f64>,
    n: usize,
    p: f64,
    s: f64,
    rho: f64,
    tau: f64,
) -> Result<LambdaComparison> {
    if !(rho > 0.0 && rho < tau) {
        return Err(Error::param("need 0 < rho < tau"));
    }
    if !(p >= 1.0 && p < s) {
        return Err(Error::param("need 1 <= p < s"));
    }
    if values.values().any(|&x| x.is_nan() || x < 0.0) {
        return Err(Error::param("values must be nonnegative"));
    }
    let ell = 1.0 / (1.0 / p - 1.0 / s);
    let tl = tau.powf(ell);
    let constant = (tl / (tl - rho.powf(ell))).powf(n as f64 / ell);
    let norm_s_rho = weighted_lp(values, s, rho);
    let norm_p_rho = weighted_lp(values, p, rho);
    let norm_s_tau = weighted_lp(values, s, tau);
    let slack = 1e-12;
    let bound_holds = norm_s_rho <= norm_p_rho * (1.0 + slack)
        && norm_p_rho <= constant * norm_s_tau * (1.0 + slack);
    Ok(LambdaComparison {
        bound_holds,
        constant,
        norm_s_rho,
        norm_p_rho,
        norm_s_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombinat::Word;
    use crate::C64;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn polydisk_example() {
        let q = QParam::real(0.5).unwrap();
        let a = QPolynomial::monomial(2, q, mi(&[1, 1]), one());
        let spec = NormSpec::simple(Family::PolydiskL1, 1.0).unwrap();
        assert!((qpoly_norm(&a, &spec).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_has_norm_one_everywhere() {
        let q = QParam::real(0.7).unwrap();
        for family in Family::ALL {
            let spec = NormSpec::new(family, 0.6, Some(2.0), Some(3)).unwrap();
            let e = match family.kind() {
                "qpoly" => Element::QPoly(QPolynomial::one(3, q)),
                "free" => Element::Free(FreeElement::one(3), None),
                "laurent" => Element::Laurent(LaurentElement::one(3)),
                _ => Element::HSeries(HSeriesElement::one(3, 3)),
            };
            assert!((norm(&e, &spec).unwrap() - 1.0).abs() < 1e-15, "{family}");
        }
    }

    #[test]
    fn free_polydisk_counts_switches() {
        let f = FreeElement::word(2, Word::new(vec![1, 2, 1]), one());
        let spec = NormSpec::new(Family::FreePolydisk, 1.0, Some(2.0), None).unwrap();
        assert!((free_norm(&f, &spec).unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn laurent_example() {
        let a = LaurentElement::monomial(mi(&[1, 1]), -3, one());
        let spec = NormSpec::new(Family::LaurentDnr, 1.0, Some(2.0), None).unwrap();
        assert!((laurent_norm(&a, &spec).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn omega_branches() {
        assert_eq!(omega(&mi(&[1, 1]), 5), 5);
        assert_eq!(omega(&mi(&[1, 1]), -1), 0);
        assert_eq!(omega(&mi(&[1, 1]), -3), -2);
    }

    #[test]
    fn family_mismatch_and_bad_rho() {
        let q = QParam::real(0.5).unwrap();
        let a = Element::QPoly(QPolynomial::one(2, q));
        let spec = NormSpec::simple(Family::FreeTaylor, 1.0).unwrap();
        assert!(matches!(norm(&a, &spec), Err(Error::FamilyMismatch { .. })));
        assert!(NormSpec::simple(Family::Ball, 0.0).is_err());
        assert!(NormSpec::simple(Family::FreePolydisk, 1.0).is_err());
        assert!(NormSpec::new(Family::LaurentDnr, 1.0, Some(0.5), None).is_err());
    }

    #[test]
    fn lambda_constant_example() {
        let mut v = BTreeMap::new();
        v.insert(mi(&[0]), 1.0);
        v.insert(mi(&[3]), 0.7);
        let r = lambda_p_compare(&v, 1, 1.0, f64::INFINITY, 0.5, 1.0).unwrap();
        assert!((r.constant - 2.0).abs() < 1e-15);
        assert!(r.bound_holds);
        let mut single = BTreeMap::new();
        single.insert(mi(&[0, 0]), 1.0);
        let r = lambda_p_compare(&single, 2, 1.0, 2.0, 0.3, 0.9).unwrap();
        assert_eq!((r.norm_s_rho, r.norm_p_rho, r.norm_s_tau), (1.0, 1.0, 1.0));
    }

    #[test]
    fn classical_ball_coefficient() {
        assert_eq!(classical_ball_sup_coeff(&mi(&[0, 0]), 2.0), 1.0);
        let b = classical_ball_sup_coeff(&mi(&[1, 1]), 1.0);
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bullet_circ_constant_is_at_least_one() {
        let c = bullet_circ_constant(2, 0.5, 1.0).unwrap();
        // d=1: sqrt(2)/2, d=0: 1.
        assert!((c - 1.0).abs() < 1e-15);
        assert!(bullet_circ_constant(3, 0.9, 1.0).unwrap() > 1.0);
    }
}
