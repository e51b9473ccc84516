//! Truncated Fock representation of the q-plane algebra for real 0 < q < 1.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::elements::QPolynomial;
use crate::error::{Error, Result};
use crate::norms::{qpoly_norm, Family, NormSpec};
use crate::qcombinat::{
    ln_q_factorial_multi_real, ln_weight_polydisk, q_pochhammer_inf, MultiIndex, QParam,
};
use crate::C64;

/// Sparse vector Σ v_k e_k.
pub type FockVector = BTreeMap<MultiIndex, C64>;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;
/// Largest domain dimension accepted by [`op_norm_bounds`].
pub const MAX_DOMAIN: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockTruncation {
    pub n: usize,
    pub q: f64,
    /// Degree cutoff of the domain.
    pub depth: u32,
}

impl FockTruncation {
    pub fn new(n: usize, q: f64, depth: u32) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::param(format!("Fock layer needs 0 < q < 1, got {q}")));
        }
        Ok(FockTruncation { n, q, depth })
    }
}

fn real_q(a: &QPolynomial) -> Result<f64> {
    a.q()
        .as_unit_interval()
        .ok_or_else(|| Error::param("Fock layer needs a real q in (0, 1)"))
}

/// π(x_j) e_k = √(1−q²) √([k_j+1]_{q²}) q^{Σ_{i>j} k_i} e_{k+δ_j}.
pub fn apply_generator(j: usize, k: &MultiIndex, q: f64) -> (f64, MultiIndex) {
    let e = k.entries();
    let q2 = q * q;
    let next = e[j - 1] as i32 + 1;
    // (1−q²)[m]_{q²} = 1 − q^{2m}
    let amp = (1.0 - q2.powi(next)).sqrt();
    let tail: u32 = e[j..].iter().sum();
    let mut target = e.to_vec();
    target[j - 1] += 1;
    (amp * q.powi(tail as i32), MultiIndex::new(target))
}

/// Truncation-aware form of [`apply_generator`].
pub fn fock_apply_generator(
    j: usize,
    k: &MultiIndex,
    trunc: &FockTruncation,
) -> Result<(f64, MultiIndex)> {
    if j == 0 || j > trunc.n {
        return Err(Error::LetterOutOfRange {
            letter: j as u32,
            n: trunc.n,
        });
    }
    k.check_dim(trunc.n)?;
    if k.degree() > trunc.depth as u64 {
        return Err(Error::Truncation(format!(
            "|{k}| exceeds depth {}",
            trunc.depth
        )));
    }
    Ok(apply_generator(j, k, trunc.q))
}

/// π(x^k) e_m, applying x_n^{k_n} first and x_1^{k_1} last.
pub fn apply_monomial(k: &MultiIndex, m: &MultiIndex, q: f64) -> (f64, MultiIndex) {
    let mut coeff = 1.0;
    let mut cur = m.clone();
    for j in (1..=k.n()).rev() {
        for _ in 0..k.entries()[j - 1] {
            let (c, next) = apply_generator(j, &cur, q);
            coeff *= c;
            cur = next;
        }
    }
    (coeff, cur)
}

/// π(a) v. Results above degree `cap` are rejected.
pub fn fock_apply(a: &QPolynomial, v: &FockVector, cap: Option<u64>) -> Result<FockVector> {
    let q = real_q(a)?;
    let mut out = FockVector::new();
    for (m, vm) in v {
        m.check_dim(a.n())?;
        for (k, c) in a.terms() {
            let (amp, target) = apply_monomial(k, m, q);
            if cap.is_some_and(|cap| target.degree() > cap) {
                return Err(Error::Truncation(format!(
                    "image degree {} exceeds {}",
                    target.degree(),
                    cap.unwrap()
                )));
            }
            crate::elements::add_into(&mut out, target, c * vm * amp);
        }
    }
    Ok(out)
}

/// Closed form π(x^k) e_0 = √([k]_{q²}!) (1−q²)^{|k|/2} w_q(k) e_k.
pub fn vacuum_image(k: &MultiIndex, q: f64) -> f64 {
    let q2 = q * q;
    let qp = QParam::real(q).expect("q in (0,1)");
    (0.5 * ln_q_factorial_multi_real(k, q2)
        + 0.5 * k.degree() as f64 * (1.0 - q2).ln()
        + ln_weight_polydisk(k, qp))
    .exp()
}

/// γ_ρ(a) = Σ c_k ρ^{|k|} x^k.
pub fn dilate(a: &QPolynomial, rho: f64) -> QPolynomial {
    a.map_coeffs(|k, c| c * rho.powi(k.degree() as i32))
}

pub fn l2_norm(v: &FockVector) -> f64 {
    v.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖π(γ_ρ a) e_0‖ from the vacuum closed form.
pub fn vacuum_norm(a: &QPolynomial, rho: f64) -> Result<f64> {
    let q = real_q(a)?;
    Ok(a.terms()
        .iter()
        .map(|(k, c)| (c.norm() * rho.powi(k.degree() as i32) * vacuum_image(k, q)).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// (q²; q²)_∞^{n/2} ‖a‖^{(2)}_{D,ρ}, the vacuum-norm lower bound.
pub fn vacuum_lower_bound(a: &QPolynomial, rho: f64) -> Result<f64> {
    let q = real_q(a)?;
    let c = pochhammer_q2(q)?;
    let l2 = qpoly_norm(a, &NormSpec::simple(Family::PolydiskL2, rho)?)?;
    Ok(c.powf(a.n() as f64 / 2.0) * l2)
}

/// (q²; q²)_∞.
pub fn pochhammer_q2(q: f64) -> Result<f64> {
    let q2 = C64::new(q * q, 0.0);
    Ok(q_pochhammer_inf(q2, q2, 1e-16)?.value.re)
}

/// ((τ²−ρ²)/τ² · (q²;q²)_∞)^{n/2}, the constant in c‖a‖_{D,ρ} ≤ ‖a‖^∞_{B,τ}.
pub fn sandwich_constant(n: usize, q: f64, rho: f64, tau: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < tau) {
        return Err(Error::param("need 0 < rho < tau"));
    }
    Ok(((tau * tau - rho * rho) / (tau * tau) * pochhammer_q2(q)?).powf(n as f64 / 2.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OpNormBounds {
    /// Largest singular value of the truncated matrix of π(γ_ρ a).
    pub lower: f64,
    /// ‖a‖_{D,ρ}.
    pub upper: f64,
    /// ‖π(γ_ρ a) e_0‖.
    pub vacuum: f64,
    pub iterations: usize,
}

struct SparseColumns {
    rows: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseColumns {
    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::default(); self.rows];
        for (col, &x) in self.cols.iter().zip(v) {
            for &(r, a) in col {
                out[r] += a * x;
            }
        }
        out
    }

    fn apply_adjoint(&self, w: &[C64]) -> Vec<C64> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|&(r, a)| a.conj() * w[r]).sum())
            .collect()
    }
}

fn build_matrix(a: &QPolynomial, q: f64, depth: u32) -> Result<(Vec<MultiIndex>, SparseColumns)> {
    let domain = MultiIndex::all_up_to_degree(a.n(), depth);
    if domain.len() > MAX_DOMAIN {
        return Err(Error::limit(format!(
            "Fock domain of {} vectors exceeds {MAX_DOMAIN}",
            domain.len()
        )));
    }
    let mut rows: HashMap<MultiIndex, usize> = HashMap::new();
    let mut cols = Vec::with_capacity(domain.len());
    for m in &domain {
        let mut col: BTreeMap<usize, C64> = BTreeMap::new();
        for (k, c) in a.terms() {
            let (amp, target) = apply_monomial(k, m, q);
            let next = rows.len();
            let r = *rows.entry(target).or_insert(next);
            *col.entry(r).or_default() += c * amp;
        }
        cols.push(col.into_iter().collect());
    }
    Ok((
        domain,
        SparseColumns {
            rows: rows.len(),
            cols,
        },
    ))
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Domain sizes up to this use repeated squaring of A*A before the power steps.
const DENSE_LIMIT: usize = 600;
const SQUARINGS: usize = 60;

/// Dense Gram matrix A*A, row-major.
fn gram(m: &SparseColumns) -> Vec<C64> {
    let n = m.cols.len();
    let mut by_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); m.rows];
    for (j, col) in m.cols.iter().enumerate() {
        for &(r, a) in col {
            by_row[r].push((j, a));
        }
    }
    let mut b = vec![C64::default(); n * n];
    for row in &by_row {
        for &(i, ai) in row {
            for &(j, aj) in row {
                b[i * n + j] += ai.conj() * aj;
            }
        }
    }
    b
}

fn square_normalized(b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::default(); n * n];
    for i in 0..n {
        for k in 0..n {
            let bik = b[i * n + k];
            if bik == C64::default() {
                continue;
            }
            let (row_out, row_k) = (i * n, k * n);
            for j in 0..n {
                out[row_out + j] += bik * b[row_k + j];
            }
        }
    }
    let scale = out.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 {
        out.iter_mut().for_each(|c| *c /= scale);
    }
    out
}

/// Starting vector for the power steps: for small domains, the dominant column of
/// (A*A)^{2^s}, which already lies in the top singular subspace.
fn start_vector(m: &SparseColumns) -> Vec<C64> {
    let n = m.cols.len();
    if n > DENSE_LIMIT {
        return vec![C64::new(1.0, 0.0); n];
    }
    let mut b = gram(m);
    for _ in 0..SQUARINGS {
        b = square_normalized(&b, n);
    }
    let best = (0..n)
        .max_by(|&x, &y| {
            let nx: f64 = (0..n).map(|i| b[i * n + x].norm_sqr()).sum();
            let ny: f64 = (0..n).map(|i| b[i * n + y].norm_sqr()).sum();
            nx.total_cmp(&ny)
        })
        .unwrap_or(0);
    let v: Vec<C64> = (0..n).map(|i| b[i * n + best]).collect();
    if vec_norm(&v) > 0.0 {
        v
    } else {
        vec![C64::new(1.0, 0.0); n]
    }
}

/// Power iteration on A*A. Every Rayleigh value ‖Av‖/‖v‖ is at most the largest
/// singular value, so the maximum seen is a valid lower bound even before convergence.
fn top_singular(m: &SparseColumns) -> (f64, usize) {
    if m.cols.is_empty() || m.rows == 0 {
        return (0.0, 0);
    }
    let mut v = start_vector(m);
    let mut best = 0.0f64;
    for it in 1..=POWER_MAX_ITER {
        let nv = vec_norm(&v);
        if nv == 0.0 {
            return (best, it);
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let w = m.apply(&v);
        let sigma = vec_norm(&w);
        let prev = best;
        best = best.max(sigma);
        if it > 1 && (sigma - prev).abs() <= POWER_TOL * sigma {
            return (best, it);
        }
        v = m.apply_adjoint(&w);
    }
    (best, POWER_MAX_ITER)
}

/// Bounds on the quantum sup norm ‖π(γ_ρ a)‖ from the truncation {|k| ≤ depth}.
pub fn op_norm_bounds(a: &QPolynomial, rho: f64, depth: u32) -> Result<OpNormBounds> {
    let q = real_q(a)?;
    let (_, m) = build_matrix(&dilate(a, rho), q, depth)?;
    let (lower, iterations) = top_singular(&m);
    Ok(OpNormBounds {
        lower,
        upper: qpoly_norm(a, &NormSpec::simple(Family::PolydiskL1, rho)?)?,
        vacuum: vacuum_norm(a, rho)?,
        iterations,
    })
}

/// Bounds for every cutoff 0..=depth. Lower bounds are carried forward as a running
/// maximum, which keeps them valid since the true values are nondecreasing.
pub fn op_norm_sweep(a: &QPolynomial, rho: f64, depth: u32) -> Result<Vec<OpNormBounds>> {
    let mut out: Vec<OpNormBounds> = Vec::with_capacity(depth as usize + 1);
    for d in 0..=depth {
        let mut b = op_norm_bounds(a, rho, d)?;
        if let Some(prev) = out.last() {
            b.lower = b.lower.max(prev.lower);
        }
        out.push(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn qp(x: f64) -> QParam {
        QParam::real(x).unwrap()
    }

    #[test]
    fn generator_examples() {
        let t = FockTruncation::new(1, 0.5, 4).unwrap();
        let (c, k) = fock_apply_generator(1, &mi(&[0]), &t).unwrap();
        assert!((c - 0.75f64.sqrt()).abs() < 1e-15 && k == mi(&[1]));
        let (c, k) = fock_apply_generator(1, &mi(&[1]), &t).unwrap();
        assert!((c - (0.75f64 * 1.25).sqrt()).abs() < 1e-15 && k == mi(&[2]));
        let t2 = FockTruncation::new(2, 0.5, 4).unwrap();
        let (c, k) = fock_apply_generator(1, &mi(&[0, 1]), &t2).unwrap();
        assert!((c - 0.75f64.sqrt() * 0.5).abs() < 1e-15 && k == mi(&[1, 1]));
        assert!(fock_apply_generator(1, &mi(&[5]), &t).is_err());
        assert!(FockTruncation::new(1, 1.0, 3).is_err());
    }

    #[test]
    fn vacuum_example() {
        let a = QPolynomial::monomial(2, qp(0.5), mi(&[1, 1]), C64::new(1.0, 0.0));
        let mut e0 = FockVector::new();
        e0.insert(mi(&[0, 0]), C64::new(1.0, 0.0));
        let v = fock_apply(&a, &e0, None).unwrap();
        assert!((v[&mi(&[1, 1])].re - 0.375).abs() < 1e-15);
        assert!((vacuum_image(&mi(&[1, 1]), 0.5) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn single_generator_band_matrix() {
        let a = QPolynomial::generator(1, qp(0.5), 1);
        let b = op_norm_bounds(&a, 1.0, 5).unwrap();
        assert!((b.lower - (1.0 - 0.5f64.powi(12)).sqrt()).abs() < 1e-12);
        assert_eq!(b.upper, 1.0);
    }

    #[test]
    fn unit_has_unit_bounds() {
        let b = op_norm_bounds(&QPolynomial::one(2, qp(0.3)), 1.0, 3).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && b.upper == 1.0 && (b.vacuum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_is_monotone() {
        let q = qp(0.6);
        let a = QPolynomial::from_terms(
            2,
            q,
            [
                (mi(&[1, 0]), C64::new(0.3, 0.1)),
                (mi(&[0, 2]), C64::new(-0.5, 0.2)),
                (mi(&[1, 1]), C64::new(0.1, 0.0)),
            ],
        )
        .unwrap();
        let s = op_norm_sweep(&a, 0.9, 6).unwrap();
        assert!(s.windows(2).all(|w| w[1].lower >= w[0].lower));
        assert!(s.iter().all(|b| b.lower <= b.upper * (1.0 + 1e-12)));
    }
}
