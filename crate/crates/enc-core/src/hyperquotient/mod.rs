//! Hyperquotient germs: setting validation, the lattice `N`, the
//! low-value vector search, and the ambient discrepancy with a monomial
//! boundary.

pub mod beta;
pub mod setting;
pub mod support;

pub use beta::{
    ambient_discrepancy, beta_search, enumerate_lattice, is_primitive_in_lattice, value,
    BetaResult,
};
pub use setting::{FType, HyperquotientGerm, SettingCheck, ValidationReport};
