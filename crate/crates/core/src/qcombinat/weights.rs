use crate::qcombinat::{ln_q_factorial_multi_real, ln_q_factorial_real, MultiIndex, QParam};

/// ln w_q(k): zero for |q| ≥ 1, otherwise Σ_{i<j} k_i k_j · ln|q|.
pub fn ln_weight_polydisk(k: &MultiIndex, q: QParam) -> f64 {
    if q.abs() >= 1.0 {
        0.0
    } else {
        k.pair_sum() as f64 * q.ln_abs()
    }
}

/// Polydisk monomial weight w_q(k).
pub fn weight_polydisk(k: &MultiIndex, q: QParam) -> f64 {
    ln_weight_polydisk(k, q).exp()
}

/// ln u_q(k) = Σ_{i<j} k_i k_j · ln|q| for every q.
pub fn ln_weight_u(k: &MultiIndex, q: QParam) -> f64 {
    k.pair_sum() as f64 * q.ln_abs()
}

pub fn weight_u(k: &MultiIndex, q: QParam) -> f64 {
    ln_weight_u(k, q).exp()
}

/// ln of the ball weight ([k]_{|q|²}! / [|k|]_{|q|²}!)^{1/2} · u_q(k).
pub fn ln_weight_ball(k: &MultiIndex, q: QParam) -> f64 {
    let x = q.abs() * q.abs();
    0.5 * (ln_q_factorial_multi_real(k, x) - ln_q_factorial_real(k.degree(), x)) + ln_weight_u(k, q)
}

/// Ball monomial weight ‖x^k‖_B / ρ^{|k|}.
pub fn weight_ball(k: &MultiIndex, q: QParam) -> f64 {
    ln_weight_ball(k, q).exp()
}

/// ln of the same weight written over base |q|^{-2}: ([k]_{|q|^{-2}}! / [|k|]_{|q|^{-2}}!)^{1/2}.
pub fn ln_weight_ball_alt(k: &MultiIndex, q: QParam) -> f64 {
    let x = 1.0 / (q.abs() * q.abs());
    0.5 * (ln_q_factorial_multi_real(k, x) - ln_q_factorial_real(k.degree(), x))
}

pub fn weight_ball_alt(k: &MultiIndex, q: QParam) -> f64 {
    ln_weight_ball_alt(k, q).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn polydisk_weight_values() {
        let q = QParam::real(0.5).unwrap();
        assert_eq!(weight_polydisk(&mi(&[1, 1]), q), 0.5);
        assert_eq!(
            weight_polydisk(&mi(&[2, 1]), QParam::real(3.0).unwrap()),
            1.0
        );
        assert_eq!(weight_polydisk(&mi(&[0, 0]), q), 1.0);
        assert!((weight_u(&mi(&[1, 1]), QParam::real(3.0).unwrap()) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn ball_weight_value_at_one_one() {
        let q = QParam::real(0.5).unwrap();
        let expect = 5f64.powf(-0.5);
        assert!((weight_ball(&mi(&[1, 1]), q) - expect).abs() < 1e-15);
        assert!((weight_ball_alt(&mi(&[1, 1]), q) - expect).abs() < 1e-15);
    }

    #[test]
    fn ball_weight_at_unimodular_q_is_classical() {
        // k!/|k|! for k = (2,1): 2/6.
        let q = QParam::unimodular(0.7);
        let w = weight_ball(&mi(&[2, 1]), q);
        assert!((w - (2.0f64 / 6.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn pure_powers_have_unit_ball_weight() {
        let q = QParam::real(0.3).unwrap();
        assert!((weight_ball(&mi(&[0, 7, 0]), q) - 1.0).abs() < 1e-14);
    }
}
