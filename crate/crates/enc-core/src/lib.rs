//! Exact-arithmetic minimal log discrepancies of cyclic quotient and
//! hyperquotient threefold germs.
//!
//! The crate computes, with exact rational arithmetic throughout:
//!
//! * log discrepancies and mlds of isolated cyclic quotient singularities,
//!   the exceptionally-non-canonical (enc) test, and the mld of a pair
//!   with a monomial boundary ([`toric`]);
//! * the distinguished low-value lattice vector of a hyperquotient germ
//!   and the ambient discrepancy with boundary ([`hyperquotient`]);
//! * exhaustive verifiers for the arithmetic lemmas behind the
//!   classification: the terminal lemma, the index-bound search, and the
//!   fivefold transfer scan ([`lemmas`]);
//! * the parameter-family sweeps and the census of valid germs
//!   ([`classification`]);
//! * the 1-gap scan and realized-mld sweeps ([`explore`]).
//!
//! There is no floating point anywhere: scalars are [`exact::Rat`], sweeps
//! run on integer residues scaled by the group order.

pub mod arith;
pub mod classification;
pub mod error;
pub mod exact;
pub mod explore;
pub mod hyperquotient;
pub mod lemmas;
pub mod toric;

pub use error::{CoreError, HyperError, ToricError};
pub use exact::{Monomial, MonomialSupport, Rat, Weight};
