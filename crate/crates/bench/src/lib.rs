//! Fixed inputs shared by the kernel benchmarks.

use qdisk_core::random::{stream, tag, Shape};
use qdisk_core::{FreeElement, QParam, QPolynomial};

/// Seeded q-plane element with `terms` terms of degree ≤ `degree`.
pub fn qpoly(n: usize, degree: u32, terms: usize, q: f64) -> QPolynomial {
    let q = QParam::real(q).expect("nonzero q");
    Shape::new(n, degree, terms).qpoly(&mut stream(0, tag("bench-qpoly"), terms as u64), q)
}

/// Seeded free element with words of length ≤ `length`.
pub fn free(n: usize, length: u32, terms: usize) -> FreeElement {
    Shape::new(n, length, terms).free(&mut stream(0, tag("bench-free"), terms as u64))
}
