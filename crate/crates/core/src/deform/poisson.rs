use crate::deform::sigma;
use crate::elements::{qpoly_mul, QPolynomial};
use crate::error::{Error, Result};
use crate::norms::{qpoly_norm, NormSpec};
use crate::qcombinat::QParam;
use crate::C64;

fn require_commutative(a: &QPolynomial) -> Result<()> {
    if a.q().value() != C64::new(1.0, 0.0) {
        return Err(Error::param(
            "Poisson bracket needs commutative inputs (q = 1)",
        ));
    }
    Ok(())
}

/// {x^k, x^ℓ} = (σ(k,ℓ) − σ(ℓ,k)) x^{k+ℓ}, extended bilinearly.
pub fn poisson_bracket(f: &QPolynomial, g: &QPolynomial) -> Result<QPolynomial> {
    require_commutative(f)?;
    require_commutative(g)?;
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: g.n(),
        });
    }
    let mut out = QPolynomial::zero(f.n(), f.q());
    for (k, a) in f.terms() {
        for (l, b) in g.terms() {
            let w = sigma(k, l)? as f64 - sigma(l, k)? as f64;
            if w != 0.0 {
                out.add_term(k.add(l), a * b * w);
            }
        }
    }
    Ok(out)
}

/// ‖(f_h g_h − g_h f_h)/h − i{f,g}_h‖ in the q-plane algebra at q = e^{ih}.
pub fn quantization_defect(
    f: &QPolynomial,
    g: &QPolynomial,
    h: f64,
    spec: &NormSpec,
) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::param("h must be nonzero and finite"));
    }
    let bracket = poisson_bracket(f, g)?;
    let q = QParam::unimodular(h);
    let (fh, gh) = (f.with_q(q), g.with_q(q));
    let comm = qpoly_mul(&fh, &gh, None)?.sub(&qpoly_mul(&gh, &fh, None)?)?;
    let defect = comm
        .scale(C64::new(1.0 / h, 0.0))
        .sub(&bracket.with_q(q).scale(C64::new(0.0, 1.0)))?;
    qpoly_norm(&defect, spec)
}

/// e^{ix} − 1 without cancellation at small x.
fn expm1_i(x: f64) -> C64 {
    let s = (0.5 * x).sin();
    C64::new(-2.0 * s * s, x.sin())
}

/// The same defect written termwise as ‖Σ_m Σ_{k+ℓ=m} a_k b_ℓ φ_{kℓ}(h) x^m‖ with
/// φ_{kℓ}(h) = (e^{−ihσ(ℓ,k)} − e^{−ihσ(k,ℓ)})/h − i(σ(k,ℓ) − σ(ℓ,k)).
pub fn defect_series(f: &QPolynomial, g: &QPolynomial, h: f64, spec: &NormSpec) -> Result<f64> {
    require_commutative(f)?;
    require_commutative(g)?;
    if h == 0.0 || !h.is_finite() {
        return Err(Error::param("h must be nonzero and finite"));
    }
    let mut out = QPolynomial::zero(f.n(), QParam::unimodular(h));
    for (k, a) in f.terms() {
        for (l, b) in g.terms() {
            let (skl, slk) = (sigma(k, l)? as f64, sigma(l, k)? as f64);
            let diff = expm1_i(-h * slk) - expm1_i(-h * skl);
            let phi = diff / h - C64::new(0.0, skl - slk);
            out.add_term(k.add(l), a * b * phi);
        }
    }
    qpoly_norm(&out, spec)
}

/// Least-squares slope of ln(defect) against ln(h).
pub fn defect_order(f: &QPolynomial, g: &QPolynomial, hs: &[f64], spec: &NormSpec) -> Result<f64> {
    let pts = hs
        .iter()
        .map(|&h| Ok((h.ln(), quantization_defect(f, g, h, spec)?.ln())))
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
