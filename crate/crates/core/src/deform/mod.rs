//! Formal deformation layer: truncated star product in the parameter h, the
//! Poisson bracket and quantization defect, the formal ball lift, and fiber norm scans.

mod formal;
mod poisson;
mod scan;

pub use formal::{formal_ball_lift, formal_normal_order, FormalFree};
pub use poisson::{defect_order, defect_series, poisson_bracket, quantization_defect};
pub use scan::{bundle_scan, max_jump_ratio, write_csv, ScanPath, ScanRow};

use std::collections::BTreeMap;

use crate::elements::{add_into, QPolynomial};
use crate::error::{Error, Result};
use crate::qcombinat::{MultiIndex, QParam};
use crate::C64;

/// σ(k, ℓ) = Σ_{i<j} k_i ℓ_j.
pub fn sigma(k: &MultiIndex, l: &MultiIndex) -> Result<u64> {
    l.check_dim(k.n())?;
    let mut acc = 0u64;
    let mut prefix = 0u64;
    for (&ki, &li) in k.entries().iter().zip(l.entries()) {
        acc += prefix * li as u64;
        prefix += ki as u64;
    }
    Ok(acc)
}

/// Coefficients of e^{i a h} through h^order: (i a)^s / s!.
pub fn taylor_phase(a: f64, order: u32) -> Vec<C64> {
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut term = C64::new(1.0, 0.0);
    for s in 0..=order {
        if s > 0 {
            term = term * C64::new(0.0, a) / s as f64;
        }
        out.push(term);
    }
    out
}

/// Finite element Σ c_{p,k} h^p x^k with p ≤ order.
#[derive(Clone, Debug, PartialEq)]
pub struct HSeriesElement {
    n: usize,
    order: u32,
    terms: BTreeMap<(u32, MultiIndex), C64>,
}

impl HSeriesElement {
    pub fn zero(n: usize, order: u32) -> Self {
        HSeriesElement {
            n,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, order: u32) -> Self {
        let mut f = Self::zero(n, order);
        f.add_term(0, MultiIndex::zeros(n), C64::new(1.0, 0.0));
        f
    }

    pub fn generator(n: usize, order: u32, j: usize) -> Self {
        let mut f = Self::zero(n, order);
        f.add_term(0, MultiIndex::unit(n, j), C64::new(1.0, 0.0));
        f
    }

    pub fn from_terms(
        n: usize,
        order: u32,
        terms: impl IntoIterator<Item = (u32, MultiIndex, C64)>,
    ) -> Result<Self> {
        let mut f = Self::zero(n, order);
        for (p, k, c) in terms {
            k.check_dim(n)?;
            if p > order {
                return Err(Error::param(format!("h-power {p} exceeds order {order}")));
            }
            f.add_term(p, k, c);
        }
        Ok(f)
    }

    /// The h-constant element with the coefficients of `a`.
    pub fn from_qpoly(a: &QPolynomial, order: u32) -> Self {
        let mut f = Self::zero(a.n(), order);
        for (k, c) in a.terms() {
            f.add_term(0, k.clone(), *c);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<(u32, MultiIndex), C64> {
        &self.terms
    }

    pub fn coeff(&self, p: u32, k: &MultiIndex) -> C64 {
        self.terms.get(&(p, k.clone())).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with p above the order are dropped.
    pub fn add_term(&mut self, p: u32, k: MultiIndex, c: C64) {
        debug_assert_eq!(k.n(), self.n);
        if p <= self.order {
            add_into(&mut self.terms, (p, k), c);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = HSeriesElement::zero(self.n, self.order.min(other.order));
        for ((p, k), c) in self.terms.iter().chain(&other.terms) {
            out.add_term(*p, k.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n, self.order);
        for ((p, k), c) in &self.terms {
            out.add_term(*p, k.clone(), c * s);
        }
        out
    }

    /// Substitutes h = h0, landing in the q-plane algebra at q = e^{i h0}.
    pub fn evaluate(&self, h0: f64) -> QPolynomial {
        let mut out = QPolynomial::zero(self.n, QParam::unimodular(h0));
        for ((p, k), c) in &self.terms {
            out.add_term(k.clone(), c * h0.powi(*p as i32));
        }
        out
    }

    /// Largest coefficient difference on the union of supports.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (key, c) in &self.terms {
            let d = other.terms.get(key).copied().unwrap_or_default();
            worst = worst.max((c - d).norm());
        }
        for (key, c) in &other.terms {
            if !self.terms.contains_key(key) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

/// Truncated star product: x^k ⋆ x^ℓ = T_N(e^{−ihσ(ℓ,k)}) x^{k+ℓ}.
pub fn star_product(
    f: &HSeriesElement,
    g: &HSeriesElement,
    order: u32,
    degree_cap: Option<u64>,
) -> Result<HSeriesElement> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: g.n,
        });
    }
    if order > f.order || order > g.order {
        return Err(Error::param(format!(
            "order {order} exceeds operand orders {} and {}",
            f.order, g.order
        )));
    }
    let mut out = HSeriesElement::zero(f.n, order);
    for ((p1, k), c) in &f.terms {
        for ((p2, l), d) in &g.terms {
            let base = p1 + p2;
            if base > order {
                continue;
            }
            let m = k.add(l);
            if degree_cap.is_some_and(|cap| m.degree() > cap) {
                continue;
            }
            let phase = taylor_phase(-(sigma(l, k)? as f64), order - base);
            for (s, t) in phase.into_iter().enumerate() {
                if t != C64::default() {
                    out.add_term(base + s as u32, m.clone(), c * d * t);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&mi(&[1, 0]), &mi(&[0, 1])).unwrap(), 1);
        assert_eq!(sigma(&mi(&[0, 1]), &mi(&[1, 0])).unwrap(), 0);
        assert_eq!(sigma(&mi(&[2, 1]), &mi(&[1, 3])).unwrap(), 6);
        assert!(sigma(&mi(&[1]), &mi(&[1, 0])).is_err());
    }

    #[test]
    fn generator_products() {
        let x1 = HSeriesElement::generator(2, 2, 1);
        let x2 = HSeriesElement::generator(2, 2, 2);
        let a = star_product(&x1, &x2, 2, None).unwrap();
        assert_eq!(a.terms().len(), 1);
        assert_eq!(a.coeff(0, &mi(&[1, 1])), C64::new(1.0, 0.0));
        let b = star_product(&x2, &x1, 2, None).unwrap();
        assert_eq!(b.coeff(0, &mi(&[1, 1])), C64::new(1.0, 0.0));
        assert_eq!(b.coeff(1, &mi(&[1, 1])), C64::new(0.0, -1.0));
        assert_eq!(b.coeff(2, &mi(&[1, 1])), C64::new(-0.5, 0.0));
        let one = HSeriesElement::one(2, 2);
        assert_eq!(star_product(&a, &one, 2, None).unwrap(), a);
        assert!(star_product(&a, &HSeriesElement::one(2, 1), 2, None).is_err());
    }

    #[test]
    fn order_zero_is_commutative() {
        let x1 = HSeriesElement::generator(2, 0, 1);
        let x2 = HSeriesElement::generator(2, 0, 2);
        assert_eq!(
            star_product(&x1, &x2, 0, None).unwrap(),
            star_product(&x2, &x1, 0, None).unwrap()
        );
    }
}
