//! Exact multiplicity invariants of homogeneous ideals in standard graded
//! domains, and the integral-dependence tests built on them.

pub mod checker;
pub mod error;
pub mod field;
pub mod gb;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod mult;
pub mod poly;
pub mod ring;

pub use error::{Error, HypothesisError, Result};
pub use field::{Field, FieldSpec, PrimeField, Rational, Rationals};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::{GradedIdeal, RingSpec};
