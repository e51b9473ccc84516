use std::collections::BTreeMap;

use crate::elements::qpoly::add_into;
use crate::elements::QPolynomial;
use crate::error::{Error, Result};
use crate::qcombinat::{inversions, word_profile, QParam, Word};
use crate::C64;

/// Finite element Σ c_α ζ_α of the free algebra on n generators.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeElement {
    n: usize,
    terms: BTreeMap<Word, C64>,
}

impl FreeElement {
    pub fn zero(n: usize) -> Self {
        FreeElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::word(n, Word::empty(), C64::new(1.0, 0.0))
    }

    /// c ζ_α. Letters are not validated; use [`FreeElement::from_terms`] for that.
    pub fn word(n: usize, alpha: Word, c: C64) -> Self {
        let mut f = Self::zero(n);
        f.add_term(alpha, c);
        f
    }

    pub fn generator(n: usize, j: usize) -> Self {
        Self::word(n, Word::new(vec![j as u32]), C64::new(1.0, 0.0))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, C64)>) -> Result<Self> {
        let mut f = Self::zero(n);
        for (w, c) in terms {
            w.check_letters(n)?;
            f.add_term(w, c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, C64> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &Word) -> C64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, alpha: Word, c: C64) {
        add_into(&mut self.terms, alpha, c);
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }
}

/// Concatenation product; words longer than `length_cap` are dropped.
pub fn free_mul(
    a: &FreeElement,
    b: &FreeElement,
    length_cap: Option<usize>,
) -> Result<FreeElement> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let mut out = FreeElement::zero(a.n);
    for (u, c) in &a.terms {
        for (v, d) in &b.terms {
            if length_cap.is_some_and(|cap| u.len() + v.len() > cap) {
                continue;
            }
            out.add_term(u.concat(v), c * d);
        }
    }
    Ok(out)
}

/// Image of ζ_α in the q-plane algebra: x_α = q^{−m(α)} x^{p(α)}.
pub fn normal_order(f: &FreeElement, q: QParam) -> Result<QPolynomial> {
    let mut out = QPolynomial::zero(f.n, q);
    for (w, c) in &f.terms {
        let k = word_profile(w, f.n)?;
        out.add_term(k, c * q.powi(-(inversions(w) as i64)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombinat::MultiIndex;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn concatenation() {
        let a = FreeElement::generator(2, 2);
        let b = FreeElement::generator(2, 1);
        let p = free_mul(&a, &b, None).unwrap();
        assert_eq!(p.coeff(&w(&[2, 1])), C64::new(1.0, 0.0));
        assert!(free_mul(&a, &b, Some(1)).unwrap().is_zero());
        assert_eq!(free_mul(&FreeElement::one(2), &a, None).unwrap(), a);
    }

    #[test]
    fn normal_order_examples() {
        let q = QParam::real(0.5).unwrap();
        let f = FreeElement::word(2, w(&[2, 1]), C64::new(1.0, 0.0));
        let x = normal_order(&f, q).unwrap();
        assert_eq!(x.coeff(&MultiIndex::new(vec![1, 1])), C64::new(2.0, 0.0));
        let e = normal_order(&FreeElement::one(2), q).unwrap();
        assert_eq!(e, QPolynomial::one(2, q));
        let bad = FreeElement::word(2, w(&[3]), C64::new(1.0, 0.0));
        assert!(normal_order(&bad, q).is_err());
    }
}
