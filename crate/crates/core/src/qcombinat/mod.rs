//! q-numbers, weight functions and word statistics.

mod qnum;
mod weights;
mod words;

pub use qnum::{
    ln_q_factorial_multi_real, ln_q_factorial_real, ln_q_int_real, q_factorial, q_factorial_multi,
    q_int, q_multinomial, q_multinomial_ratio, q_pochhammer_inf, Pochhammer,
    POCHHAMMER_MAX_FACTORS,
};
pub use weights::{
    ln_weight_ball, ln_weight_ball_alt, ln_weight_polydisk, ln_weight_u, weight_ball,
    weight_ball_alt, weight_polydisk, weight_u,
};
pub use words::{
    delta_word, fiber_count, fiber_words, inversion_distribution, inversions, switch_count,
    word_profile, word_with_inversions, FIBER_CAP,
};

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Nonzero finite deformation parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam(C64);

impl QParam {
    pub fn new(q: C64) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::param("q must be finite"));
        }
        if q.norm() == 0.0 {
            return Err(Error::param("q must be nonzero"));
        }
        Ok(QParam(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(C64::new(q, 0.0))
    }

    /// q = exp(i theta).
    pub fn unimodular(theta: f64) -> Self {
        QParam(C64::from_polar(1.0, theta))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }

    pub fn ln_abs(&self) -> f64 {
        self.0.norm().ln()
    }

    pub fn inv(&self) -> Self {
        QParam(self.0.inv())
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.abs() - 1.0).abs() <= tol
    }

    /// Real value in (0, 1), if q is one.
    pub fn as_unit_interval(&self) -> Option<f64> {
        (self.0.im == 0.0 && self.0.re > 0.0 && self.0.re < 1.0).then_some(self.0.re)
    }

    /// q^e for any integer exponent.
    pub fn powi(&self, e: i64) -> C64 {
        let base = if e < 0 { self.0.inv() } else { self.0 };
        complex_powu(base, e.unsigned_abs())
    }
}

pub(crate) fn complex_powu(mut base: C64, mut e: u64) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// Exponent vector k of a monomial x^k.
///
/// Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector for generator `j` (1-based).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j - 1] = 1;
        MultiIndex(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.n(), other.n());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Σ_{i<j} k_i k_j.
    pub fn pair_sum(&self) -> u64 {
        let mut acc = 0u64;
        let mut prefix = 0u64;
        for &x in &self.0 {
            acc += prefix * x as u64;
            prefix += x as u64;
        }
        acc
    }

    pub fn reversed(&self) -> MultiIndex {
        MultiIndex(self.0.iter().rev().copied().collect())
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.n(),
            });
        }
        Ok(())
    }

    /// All multi-indices of length `n` with total degree exactly `d`, lexicographically.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        let mut cur = vec![0u32; n];
        fill_compositions(&mut cur, 0, d, &mut out);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// All multi-indices of length `n` with degree at most `d`, in index order.
    pub fn all_up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|e| Self::all_of_degree(n, e)).collect()
    }
}

fn fill_compositions(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in 0..=left {
        cur[pos] = v;
        fill_compositions(cur, pos + 1, left - v, out);
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A word in the letters 1..=n, i.e. an ordered product of generators.
///
/// Ordered by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn check_letters(&self, n: usize) -> Result<()> {
        for &a in &self.0 {
            if a == 0 || a as usize > n {
                return Err(Error::LetterOutOfRange { letter: a, n });
            }
        }
        Ok(())
    }

    /// All words of length `d` over 1..=n in lexicographic order.
    pub fn all_of_length(n: usize, d: usize, cap: usize) -> Result<Vec<Word>> {
        let count = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::limit(format!(
                "{count} words of length {d} over {n} letters exceeds cap {cap}"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut cur = vec![1u32; d];
        if n == 0 {
            if d == 0 {
                out.push(Word::empty());
            }
            return Ok(out);
        }
        loop {
            out.push(Word(cur.clone()));
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if (cur[i] as usize) < n {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}
