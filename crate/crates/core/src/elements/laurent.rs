use std::collections::BTreeMap;

use crate::elements::qpoly::{add_into, commutation_exponent};
use crate::elements::QPolynomial;
use crate::error::{Error, Result};
use crate::qcombinat::{inversions, word_profile, MultiIndex, QParam, Word};
use crate::C64;

/// Finite element Σ c_{k,p} x^k z^p of the deformation algebra over C[z, 1/z],
/// with x_i x_j = z x_j x_i for i < j.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentElement {
    n: usize,
    terms: BTreeMap<(MultiIndex, i64), C64>,
}

impl LaurentElement {
    pub fn zero(n: usize) -> Self {
        LaurentElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(MultiIndex::zeros(n), 0, C64::new(1.0, 0.0))
    }

    pub fn monomial(k: MultiIndex, p: i64, c: C64) -> Self {
        let mut a = Self::zero(k.n());
        a.add_term(k, p, c);
        a
    }

    pub fn generator(n: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, j), 0, C64::new(1.0, 0.0))
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, i64, C64)>,
    ) -> Result<Self> {
        let mut a = Self::zero(n);
        for (k, p, c) in terms {
            k.check_dim(n)?;
            a.add_term(k, p, c);
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, i64), C64> {
        &self.terms
    }

    pub fn coeff(&self, k: &MultiIndex, p: i64) -> C64 {
        self.terms.get(&(k.clone(), p)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: MultiIndex, p: i64, c: C64) {
        debug_assert_eq!(k.n(), self.n);
        add_into(&mut self.terms, (k, p), c);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for ((k, p), c) in &other.terms {
            out.add_term(k.clone(), *p, *c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, p), c) in &self.terms {
            out.add_term(k.clone(), *p, c * s);
        }
        out
    }
}

/// x^k z^p · x^ℓ z^s = x^{k+ℓ} z^{p+s−Σ_{i>j} k_i ℓ_j}.
pub fn laurent_mul(
    a: &LaurentElement,
    b: &LaurentElement,
    degree_cap: Option<u64>,
) -> Result<LaurentElement> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let mut out = LaurentElement::zero(a.n);
    for ((k, p), c) in &a.terms {
        for ((l, s), d) in &b.terms {
            let m = k.add(l);
            if degree_cap.is_some_and(|cap| m.degree() > cap) {
                continue;
            }
            let shift = commutation_exponent(k, l) as i64;
            out.add_term(m, p + s - shift, c * d);
        }
    }
    Ok(out)
}

/// Substitutes z = q, landing in the q-plane algebra.
pub fn fiber_eval(a: &LaurentElement, q: QParam) -> QPolynomial {
    let mut out = QPolynomial::zero(a.n, q);
    for ((k, p), c) in &a.terms {
        out.add_term(k.clone(), c * q.powi(*p));
    }
    out
}

/// x^{p(α)} z^{−m(α)}, the normal form of the word α.
pub fn word_monomial(alpha: &Word, n: usize) -> Result<LaurentElement> {
    let k = word_profile(alpha, n)?;
    Ok(LaurentElement::monomial(
        k,
        -(inversions(alpha) as i64),
        C64::new(1.0, 0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn generators_commute_up_to_z() {
        let x1 = LaurentElement::generator(2, 1);
        let x2 = LaurentElement::generator(2, 2);
        let p = laurent_mul(&x2, &x1, None).unwrap();
        assert_eq!(p.coeff(&mi(&[1, 1]), -1), C64::new(1.0, 0.0));
        let p = laurent_mul(&x1, &x2, None).unwrap();
        assert_eq!(p.coeff(&mi(&[1, 1]), 0), C64::new(1.0, 0.0));
    }

    #[test]
    fn fiber_substitutes_z() {
        let a = LaurentElement::monomial(mi(&[1, 1]), -2, C64::new(1.0, 0.0));
        let f = fiber_eval(&a, QParam::real(0.5).unwrap());
        assert_eq!(f.coeff(&mi(&[1, 1])), C64::new(4.0, 0.0));
    }

    #[test]
    fn word_normal_form() {
        let a = word_monomial(&Word::new(vec![2, 2, 1]), 2).unwrap();
        assert_eq!(a.coeff(&mi(&[1, 2]), -2), C64::new(1.0, 0.0));
    }
}
