//! Finite elements of the q-plane, free and Laurent deformation algebras.

mod free;
mod laurent;
mod lifts;
mod qpoly;

pub use free::{free_mul, normal_order, FreeElement};
pub use laurent::{fiber_eval, laurent_mul, word_monomial, LaurentElement};
pub use lifts::{ball_lift, ball_lift_weights, polydisk_lift};
pub use qpoly::{commutation_exponent, qpoly_mul, tau_flip, QPolynomial};

pub(crate) use qpoly::add_into;

use crate::deform::HSeriesElement;
use crate::qcombinat::QParam;

/// Any element kind the crate can serialize or measure.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    QPoly(QPolynomial),
    /// A free element, optionally carrying the q used to normal-order it.
    Free(FreeElement, Option<QParam>),
    Laurent(LaurentElement),
    HSeries(HSeriesElement),
}

impl Element {
    pub fn kind(&self) -> &'static str {
        match self {
            Element::QPoly(_) => "qpoly",
            Element::Free(..) => "free",
            Element::Laurent(_) => "laurent",
            Element::HSeries(_) => "hseries",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Element::QPoly(a) => a.n(),
            Element::Free(a, _) => a.n(),
            Element::Laurent(a) => a.n(),
            Element::HSeries(a) => a.n(),
        }
    }
}
