use crate::elements::FreeElement;
use crate::error::Result;
use crate::qcombinat::{
    complex_powu, delta_word, fiber_words, inversions, MultiIndex, QParam, Word,
};

/// Single-word preimage of x^k whose free Taylor norm equals the polydisk norm of x^k.
///
/// Uses the word of largest inversion number for |q| < 1 and δ(k) otherwise.
pub fn polydisk_lift(k: &MultiIndex, q: QParam) -> FreeElement {
    let alpha = if q.abs() < 1.0 {
        let mut letters = delta_word(k).letters().to_vec();
        letters.reverse();
        Word::new(letters)
    } else {
        delta_word(k)
    };
    let m = inversions(&alpha) as i64;
    FreeElement::word(k.n(), alpha, q.powi(m))
}

/// Weights c⁰_α = |q|^{−2m(α)} / Σ_β |q|^{−2m(β)} over the fiber of k, in fiber order.
pub fn ball_lift_weights(k: &MultiIndex, q: QParam, cap: usize) -> Result<Vec<(Word, f64)>> {
    let words = fiber_words(k, cap)?;
    let lnq = q.ln_abs();
    let logs: Vec<f64> = words
        .iter()
        .map(|w| -2.0 * inversions(w) as f64 * lnq)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    let ln_total = top + total.ln();
    Ok(words
        .into_iter()
        .zip(logs)
        .map(|(w, l)| (w, (l - ln_total).exp()))
        .collect())
}

/// Norm-minimizing preimage Σ_α c⁰_α q^{m(α)} ζ_α of x^k for the circular free ball norm.
pub fn ball_lift(k: &MultiIndex, q: QParam, cap: usize) -> Result<FreeElement> {
    let weights = ball_lift_weights(k, q, cap)?;
    let phase = q.value() / q.abs();
    let lnq = q.ln_abs();
    let mut out = FreeElement::zero(k.n());
    for (w, c0) in weights {
        let m = inversions(&w);
        let magnitude = (c0.ln() + m as f64 * lnq).exp();
        out.add_term(w, complex_powu(phase, m) * magnitude);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::normal_order;
    use crate::qcombinat::FIBER_CAP;
    use crate::C64;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn ball_lift_example() {
        let q = QParam::real(0.5).unwrap();
        let f = ball_lift(&mi(&[1, 1]), q, FIBER_CAP).unwrap();
        assert!((f.coeff(&Word::new(vec![1, 2])) - C64::new(0.2, 0.0)).norm() < 1e-15);
        assert!((f.coeff(&Word::new(vec![2, 1])) - C64::new(0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lifts_are_preimages() {
        for qv in [0.3, 1.0, 2.5] {
            let q = QParam::real(qv).unwrap();
            let k = mi(&[2, 1, 1]);
            let target =
                crate::elements::QPolynomial::monomial(3, q, k.clone(), C64::new(1.0, 0.0));
            let a = normal_order(&polydisk_lift(&k, q), q).unwrap();
            assert!(a.max_coeff_diff(&target) < 1e-13);
            let b = normal_order(&ball_lift(&k, q, FIBER_CAP).unwrap(), q).unwrap();
            assert!(b.max_coeff_diff(&target) < 1e-13);
        }
    }

    #[test]
    fn polydisk_lift_word_choice() {
        let k = mi(&[1, 2]);
        let lo = polydisk_lift(&k, QParam::real(0.5).unwrap());
        assert!(lo.terms().contains_key(&Word::new(vec![2, 2, 1])));
        let hi = polydisk_lift(&k, QParam::real(2.0).unwrap());
        assert!(hi.terms().contains_key(&Word::new(vec![1, 2, 2])));
    }
}
