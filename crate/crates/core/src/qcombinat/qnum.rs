use crate::error::{Error, Result};
use crate::qcombinat::{inversion_distribution, MultiIndex};
use crate::C64;

/// Hard cap on the number of factors taken by [`q_pochhammer_inf`].
pub const POCHHAMMER_MAX_FACTORS: usize = 1_000_000;

/// [k]_q = 1 + q + ... + q^{k-1}; [0]_q = 0.
pub fn q_int(k: u64, q: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for _ in 0..k {
        acc = acc * q + 1.0;
    }
    acc
}

/// [k]_q! = [1]_q [2]_q ... [k]_q; [0]_q! = 1.
pub fn q_factorial(k: u64, q: C64) -> C64 {
    (1..=k).fold(C64::new(1.0, 0.0), |acc, j| acc * q_int(j, q))
}

/// [k]_q! = Π_i [k_i]_q!.
pub fn q_factorial_multi(k: &MultiIndex, q: C64) -> C64 {
    k.entries()
        .iter()
        .fold(C64::new(1.0, 0.0), |acc, &x| acc * q_factorial(x as u64, q))
}

/// q-multinomial coefficient [|k|]_q! / [k]_q!, evaluated from its integer
/// coefficient polynomial so that it stays defined at roots of unity.
pub fn q_multinomial(k: &MultiIndex, q: C64) -> Result<C64> {
    let coeffs = inversion_distribution(k)?;
    Ok(coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * q + c as f64))
}

/// [|k|]_q! / [k]_q! as a quotient of q-factorials.
pub fn q_multinomial_ratio(k: &MultiIndex, q: C64) -> C64 {
    q_factorial(k.degree(), q) / q_factorial_multi(k, q)
}

/// ln [j]_x for real x > 0.
pub fn ln_q_int_real(j: u64, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if j == 0 {
        return f64::NEG_INFINITY;
    }
    if x == 1.0 {
        return (j as f64).ln();
    }
    if x > 1.0 {
        return (j - 1) as f64 * x.ln() + ln_q_int_real(j, 1.0 / x);
    }
    let num = -(j as f64 * x.ln()).exp_m1();
    (num / (1.0 - x)).ln()
}

/// ln [m]_x! for real x > 0.
pub fn ln_q_factorial_real(m: u64, x: f64) -> f64 {
    (1..=m).map(|j| ln_q_int_real(j, x)).sum()
}

/// ln [k]_x! for real x > 0.
pub fn ln_q_factorial_multi_real(k: &MultiIndex, x: f64) -> f64 {
    k.entries()
        .iter()
        .map(|&e| ln_q_factorial_real(e as u64, x))
        .sum()
}

/// Truncated infinite product (a; q)_∞ together with the number of factors used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pochhammer {
    pub value: C64,
    pub factors: usize,
}

/// (a; q)_∞ = Π_{j≥0} (1 − a q^j) for |q| < 1.
///
/// Factors are multiplied until the tail bound |a q^j| / (1 − |q|) drops below `tol`.
pub fn q_pochhammer_inf(a: C64, q: C64, tol: f64) -> Result<Pochhammer> {
    let qa = q.norm();
    if qa >= 1.0 {
        return Err(Error::param(format!("(a;q)_inf needs |q| < 1, got {qa}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tolerance must be positive"));
    }
    let mut value = C64::new(1.0, 0.0);
    let mut term = a;
    let mut factors = 0usize;
    while term.norm() > tol * (1.0 - qa) {
        if factors >= POCHHAMMER_MAX_FACTORS {
            return Err(Error::limit(format!(
                "(a;q)_inf not converged after {POCHHAMMER_MAX_FACTORS} factors"
            )));
        }
        value *= C64::new(1.0, 0.0) - term;
        term *= q;
        factors += 1;
    }
    Ok(Pochhammer { value, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn small_values() {
        assert_eq!(q_int(0, r(0.5)), r(0.0));
        assert_eq!(q_int(3, r(0.5)), r(1.75));
        assert_eq!(q_int(2, r(1.0)), r(2.0));
        assert_eq!(q_factorial(3, r(0.5)), r(1.0 * 1.5 * 1.75));
        assert_eq!(q_factorial(0, r(0.3)), r(1.0));
        let k = MultiIndex::new(vec![2, 1]);
        assert_eq!(q_factorial_multi(&k, r(0.5)), r(1.5));
    }

    #[test]
    fn euler_function_values() {
        // Digits of Π(1 − 2^{−j}), j ≥ 1.
        let p = q_pochhammer_inf(r(0.5), r(0.5), 1e-16).unwrap();
        assert!((p.value.re - 0.288_788_095_086_602_4).abs() < 1e-15);
        let p = q_pochhammer_inf(r(0.25), r(0.25), 1e-16).unwrap();
        assert!((p.value.re - 0.688_537_537_120_339_7).abs() < 1e-14);
        assert!(p.factors > 10);
        assert!(q_pochhammer_inf(r(0.5), r(1.0), 1e-12).is_err());
    }

    #[test]
    fn pochhammer_cap_is_enforced() {
        let e = q_pochhammer_inf(r(1.0), r(0.999_999_9), 1e-16).unwrap_err();
        assert!(matches!(e, Error::ResourceLimit(_)));
    }

    #[test]
    fn log_q_int_matches_direct_sum() {
        for &x in &[0.04, 0.25, 0.999, 1.0, 1.7, 9.0] {
            for j in 1..12u64 {
                let direct = q_int(j, r(x)).re;
                assert!((ln_q_int_real(j, x) - direct.ln()).abs() < 1e-13, "{x} {j}");
            }
        }
    }

    #[test]
    fn multinomial_routes_agree() {
        let k = MultiIndex::new(vec![2, 1, 2]);
        for q in [r(0.3), r(2.0), C64::from_polar(1.1, 0.4)] {
            let a = q_multinomial(&k, q).unwrap();
            let b = q_multinomial_ratio(&k, q);
            assert!((a - b).norm() <= 1e-12 * b.norm());
        }
        // At a root of unity the ratio is 0/0 but the polynomial is fine.
        let w = C64::from_polar(1.0, std::f64::consts::PI);
        let k = MultiIndex::new(vec![1, 1]);
        assert!(q_multinomial(&k, w).unwrap().norm() < 1e-15);
    }
}
