//! Exact rational scalars and weight calculus.

pub mod rat;
pub mod weight;

pub use rat::Rat;
pub use weight::{Monomial, MonomialSupport, Weight};
