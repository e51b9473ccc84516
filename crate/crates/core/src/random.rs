//! Seeded random elements for property checks.
//!
//! Coefficients are uniform on the closed complex unit disk. Supports are
//! uniform over all multi-indices (or words) of degree at most the cap.
//! Every draw comes from a ChaCha8 stream, so a seed replays exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deform::HSeriesElement;
use crate::elements::{FreeElement, LaurentElement, QPolynomial};
use crate::qcombinat::{MultiIndex, QParam, Word};
use crate::C64;

pub type Stream = ChaCha8Rng;

/// 64-bit mix of a seed with a tag and case number (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64, case: u64) -> u64 {
    let mut z = seed
        .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(case.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to turn check names into stable stream tags.
pub fn tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

pub fn stream(seed: u64, tag: u64, case: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag, case))
}

/// Uniform on the closed unit disk.
pub fn coeff(rng: &mut impl Rng) -> C64 {
    let r = rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Shape of random elements: dimension, degree cap and maximum number of terms.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub n: usize,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Shape {
    pub fn new(n: usize, max_degree: u32, max_terms: usize) -> Self {
        Shape {
            n,
            max_degree,
            max_terms: max_terms.max(1),
        }
    }

    fn term_count(&self, rng: &mut impl Rng) -> usize {
        rng.gen_range(1..=self.max_terms)
    }

    /// Uniform over the C(n + cap, n) multi-indices of degree ≤ cap.
    pub fn multi_index(&self, rng: &mut impl Rng) -> MultiIndex {
        // Stars and bars: n entries plus one slack part summing to the cap.
        let total = self.n + self.max_degree as usize;
        let mut bars: Vec<usize> = rand::seq::index::sample(rng, total, self.n)
            .into_iter()
            .collect();
        bars.sort_unstable();
        let mut prev = 0usize;
        let mut k = Vec::with_capacity(self.n);
        for (i, b) in bars.into_iter().enumerate() {
            k.push((b - prev - usize::from(i > 0)) as u32);
            prev = b;
        }
        MultiIndex::new(k)
    }

    /// Uniform over all words of length ≤ cap.
    pub fn word(&self, rng: &mut impl Rng) -> Word {
        let n = self.n as f64;
        let weights: Vec<f64> = (0..=self.max_degree).map(|d| n.powi(d as i32)).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut len = self.max_degree;
        for (d, w) in weights.iter().enumerate() {
            if u < *w {
                len = d as u32;
                break;
            }
            u -= w;
        }
        Word::new((0..len).map(|_| rng.gen_range(1..=self.n as u32)).collect())
    }

    pub fn qpoly(&self, rng: &mut impl Rng, q: QParam) -> QPolynomial {
        let mut a = QPolynomial::zero(self.n, q);
        for _ in 0..self.term_count(rng) {
            let k = self.multi_index(rng);
            a.add_term(k, coeff(rng));
        }
        a
    }

    pub fn free(&self, rng: &mut impl Rng) -> FreeElement {
        let mut f = FreeElement::zero(self.n);
        for _ in 0..self.term_count(rng) {
            let w = self.word(rng);
            f.add_term(w, coeff(rng));
        }
        f
    }

    /// z-exponents uniform in −p_max..=p_max.
    pub fn laurent(&self, rng: &mut impl Rng, p_max: i64) -> LaurentElement {
        let mut a = LaurentElement::zero(self.n);
        for _ in 0..self.term_count(rng) {
            let k = self.multi_index(rng);
            a.add_term(k, rng.gen_range(-p_max..=p_max), coeff(rng));
        }
        a
    }

    pub fn hseries(&self, rng: &mut impl Rng, order: u32) -> HSeriesElement {
        let mut f = HSeriesElement::zero(self.n, order);
        for _ in 0..self.term_count(rng) {
            let k = self.multi_index(rng);
            f.add_term(rng.gen_range(0..=order), k, coeff(rng));
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn multi_indices_are_uniform_and_capped() {
        let shape = Shape::new(2, 2, 1);
        let mut rng = stream(7, tag("uniform"), 0);
        let mut counts: BTreeMap<MultiIndex, usize> = BTreeMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            *counts.entry(shape.multi_index(&mut rng)).or_default() += 1;
        }
        // Six indices of degree ≤ 2 in two variables.
        assert_eq!(counts.len(), 6);
        for (k, c) in counts {
            assert!(k.degree() <= 2);
            let frac = c as f64 / draws as f64;
            assert!((frac - 1.0 / 6.0).abs() < 0.01, "{k:?} {frac}");
        }
    }

    #[test]
    fn words_cover_every_length() {
        let shape = Shape::new(2, 3, 1);
        let mut rng = stream(1, 2, 3);
        let mut lengths = [0usize; 4];
        for _ in 0..15_000 {
            let w = shape.word(&mut rng);
            w.check_letters(2).unwrap();
            lengths[w.len()] += 1;
        }
        // Weights 1 : 2 : 4 : 8 out of 15.
        assert!((lengths[3] as f64 / 15_000.0 - 8.0 / 15.0).abs() < 0.02);
        assert!(lengths[0] > 0);
    }

    #[test]
    fn coefficients_lie_in_the_disk() {
        let mut rng = stream(0, 0, 0);
        assert!((0..1000).all(|_| coeff(&mut rng).norm() <= 1.0));
    }

    #[test]
    fn streams_replay() {
        let shape = Shape::new(3, 4, 5);
        let q = QParam::real(0.5).unwrap();
        let a = shape.qpoly(&mut stream(11, 12, 13), q);
        let b = shape.qpoly(&mut stream(11, 12, 13), q);
        assert_eq!(a, b);
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
    }
}
