//! Truncated models of the quantum polydisk and quantum ball function algebras.
//!
//! The crate covers q-combinatorics of words and multi-indices, the q-plane
//! and free algebras with their norm families, joint spectral radius
//! estimates, the truncated Fock representation, and the formal deformation
//! layer. [`verify`] binds all of it to named executable check suites.

pub mod deform;
pub mod elements;
pub mod error;
pub mod fock;
pub mod io;
pub mod norms;
pub mod qcombinat;
pub mod random;
pub mod spectral;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use deform::{FormalFree, HSeriesElement};
pub use elements::{Element, FreeElement, LaurentElement, QPolynomial};
pub use error::{Error, Result};
pub use norms::{norm, Family, NormSpec};
pub use qcombinat::{MultiIndex, QParam, Word};
