use std::collections::BTreeMap;

use crate::deform::{taylor_phase, HSeriesElement};
use crate::elements::{add_into, FreeElement};
use crate::error::Result;
use crate::qcombinat::{fiber_count, fiber_words, inversions, word_profile, MultiIndex, Word};
use crate::C64;

/// Finite element Σ c_{p,α} h^p ζ_α of the free algebra over truncated power series in h.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalFree {
    n: usize,
    order: u32,
    terms: BTreeMap<(u32, Word), C64>,
}

impl FormalFree {
    pub fn zero(n: usize, order: u32) -> Self {
        FormalFree {
            n,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<(u32, Word), C64> {
        &self.terms
    }

    pub fn coeff(&self, p: u32, alpha: &Word) -> C64 {
        self.terms
            .get(&(p, alpha.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn add_term(&mut self, p: u32, alpha: Word, c: C64) {
        if p <= self.order {
            add_into(&mut self.terms, (p, alpha), c);
        }
    }

    /// The coefficient of h^p as a free element.
    pub fn coefficient(&self, p: u32) -> FreeElement {
        let mut out = FreeElement::zero(self.n);
        for ((s, w), c) in &self.terms {
            if *s == p {
                out.add_term(w.clone(), *c);
            }
        }
        out
    }
}

/// u_k = (k!/|k|!) Σ_{α ∈ fiber(k)} T_N(e^{i m(α) h}) ζ_α.
pub fn formal_ball_lift(k: &MultiIndex, order: u32, cap: usize) -> Result<FormalFree> {
    let words = fiber_words(k, cap)?;
    let scale = 1.0 / fiber_count(k)? as f64;
    let mut out = FormalFree::zero(k.n(), order);
    for w in words {
        let m = inversions(&w) as f64;
        for (s, t) in taylor_phase(m, order).into_iter().enumerate() {
            out.add_term(s as u32, w.clone(), t * scale);
        }
    }
    Ok(out)
}

/// Normal ordering at q = e^{ih}: ζ_α ↦ T_N(e^{−i m(α) h}) x^{p(α)}, truncated at order N.
pub fn formal_normal_order(u: &FormalFree) -> Result<HSeriesElement> {
    let mut out = HSeriesElement::zero(u.n, u.order);
    for ((p, w), c) in &u.terms {
        let k = word_profile(w, u.n)?;
        let phase = taylor_phase(-(inversions(w) as f64), u.order - p);
        for (s, t) in phase.into_iter().enumerate() {
            out.add_term(p + s as u32, k.clone(), c * t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcombinat::FIBER_CAP;

    #[test]
    fn lift_of_one_one() {
        let k = MultiIndex::new(vec![1, 1]);
        let u = formal_ball_lift(&k, 1, FIBER_CAP).unwrap();
        let w12 = Word::new(vec![1, 2]);
        let w21 = Word::new(vec![2, 1]);
        assert_eq!(u.coeff(0, &w12), C64::new(0.5, 0.0));
        assert_eq!(u.coeff(0, &w21), C64::new(0.5, 0.0));
        assert_eq!(u.coeff(1, &w12), C64::default());
        assert_eq!(u.coeff(1, &w21), C64::new(0.0, 0.5));
        let x = formal_normal_order(&u).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert!((x.coeff(0, &k) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pure_power_lift_is_a_single_word() {
        let k = MultiIndex::new(vec![3, 0]);
        let u = formal_ball_lift(&k, 3, FIBER_CAP).unwrap();
        assert_eq!(u.terms().len(), 1);
        assert_eq!(u.coeff(0, &Word::new(vec![1, 1, 1])), C64::new(1.0, 0.0));
    }
}
