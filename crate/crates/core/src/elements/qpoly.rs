use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcombinat::{MultiIndex, QParam};
use crate::C64;

/// Finite element Σ c_k x^k of the q-plane algebra, x_i x_j = q x_j x_i for i < j.
#[derive(Clone, Debug, PartialEq)]
pub struct QPolynomial {
    n: usize,
    q: QParam,
    terms: BTreeMap<MultiIndex, C64>,
}

impl QPolynomial {
    pub fn zero(n: usize, q: QParam) -> Self {
        QPolynomial {
            n,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, q: QParam) -> Self {
        Self::monomial(n, q, MultiIndex::zeros(n), C64::new(1.0, 0.0))
    }

    pub fn monomial(n: usize, q: QParam, k: MultiIndex, c: C64) -> Self {
        let mut p = Self::zero(n, q);
        p.add_term(k, c);
        p
    }

    /// The generator x_j (1-based).
    pub fn generator(n: usize, q: QParam, j: usize) -> Self {
        Self::monomial(n, q, MultiIndex::unit(n, j), C64::new(1.0, 0.0))
    }

    pub fn from_terms(
        n: usize,
        q: QParam,
        terms: impl IntoIterator<Item = (MultiIndex, C64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, q);
        for (k, c) in terms {
            k.check_dim(n)?;
            p.add_term(k, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.terms
    }

    pub fn coeff(&self, k: &MultiIndex) -> C64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree in the support; 0 for the zero element.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Adds `c` to the coefficient of x^k, dropping exact zeros.
    pub fn add_term(&mut self, k: MultiIndex, c: C64) {
        debug_assert_eq!(k.n(), self.n);
        add_into(&mut self.terms, k, c);
    }

    pub fn with_q(&self, q: QParam) -> Self {
        QPolynomial {
            n: self.n,
            q,
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n, self.q);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiIndex, C64) -> C64) -> Self {
        let mut out = Self::zero(self.n, self.q);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(k, *c));
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.q != other.q {
            return Err(Error::ParameterMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// The component of total degree `d`.
    pub fn homogeneous(&self, d: u64) -> Self {
        let mut out = Self::zero(self.n, self.q);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.degree() == d) {
            out.add_term(k.clone(), *c);
        }
        out
    }

    /// Largest coefficient difference against another element on the union of supports.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            worst = worst.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

pub(crate) fn add_into<K: Ord>(terms: &mut BTreeMap<K, C64>, k: K, c: C64) {
    match terms.entry(k) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if *e.get() == C64::default() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if c != C64::default() {
                e.insert(c);
            }
        }
    }
}

/// Σ_{i>j} k_i ℓ_j, the reordering exponent of x^k · x^ℓ.
pub fn commutation_exponent(k: &MultiIndex, l: &MultiIndex) -> u64 {
    let mut acc = 0u64;
    let mut prefix = 0u64;
    for (&ki, &li) in k.entries().iter().zip(l.entries()) {
        acc += ki as u64 * prefix;
        prefix += li as u64;
    }
    acc
}

/// Product in the q-plane algebra: x^k · x^ℓ = q^{−Σ_{i>j} k_i ℓ_j} x^{k+ℓ}.
///
/// Terms of total degree above `degree_cap` are dropped.
pub fn qpoly_mul(a: &QPolynomial, b: &QPolynomial, degree_cap: Option<u64>) -> Result<QPolynomial> {
    a.check_compatible(b)?;
    let mut out = QPolynomial::zero(a.n, a.q);
    for (k, c) in &a.terms {
        for (l, d) in &b.terms {
            let m = k.add(l);
            if degree_cap.is_some_and(|cap| m.degree() > cap) {
                continue;
            }
            let phase = a.q.powi(-(commutation_exponent(k, l) as i64));
            out.add_term(m, c * d * phase);
        }
    }
    Ok(out)
}

/// Flip x_i ↦ x_{n+1−i}: x^k ↦ q^{Σ_{i<j} k_i k_j} x^{reverse(k)}, landing in the algebra at 1/q.
pub fn tau_flip(a: &QPolynomial) -> QPolynomial {
    let mut out = QPolynomial::zero(a.n, a.q.inv());
    for (k, c) in &a.terms {
        out.add_term(k.reversed(), c * a.q.powi(k.pair_sum() as i64));
    }
    out
}
