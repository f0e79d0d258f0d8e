//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not an exact rational literal: `{0}`")]
    BadRational(String),
    #[error("not a monomial: `{0}` (expected `e1.e2.e3[.e4]`)")]
    BadMonomial(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty monomial support")]
    EmptySupport,
    #[error("empty weight vector")]
    EmptyWeight,
    #[error("negative coordinate {0} in weight")]
    NegativeCoordinate(String),
    #[error("coordinate {0} exceeds 1; complement undefined")]
    CoordinateAboveOne(String),
    #[error("monomial {monomial} has total degree above the declared truncation degree {degree}")]
    MonomialBeyondTruncation { monomial: String, degree: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("germ 1/{r}({a}) is not isolated: {reason}")]
    NotIsolated { r: u64, a: String, reason: String },
    #[error("germ is not exceptionally non-canonical; the boundary formula does not apply")]
    NotEnc,
    #[error("pair is not klt: computed mld {0} <= 0")]
    NotKlt(String),
    #[error("boundary coefficient {0} outside [0, 1]")]
    BadCoefficient(String),
    #[error("boundary coefficient sum {sum} exceeds the ambient dimension {dim}")]
    CoefficientSumTooLarge { sum: String, dim: usize },
    #[error("support is not semi-invariant: monomial characters differ ({0} vs {1})")]
    NotSemiInvariant(u64, u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HyperError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("germ fails the setting conditions: {0}")]
    InvalidSetting(String),
    #[error("two distinct primitive vectors of value <= 1: {0} and {1}; germ is not enc")]
    NotEnc(String, String),
    #[error(
        "low-value region is unbounded for the listed support; supply a richer g support \
         (truncation insufficient along {0})"
    )]
    TruncationInsufficient(String),
    #[error("low-value vectors are not the multiples of a primitive vector: {0}")]
    IncoherentLowSet(String),
    #[error("no low-value vector beta exists for this germ")]
    NoBeta,
    #[error("ambient discrepancy {0} <= 0: not lc along the extracted divisor")]
    NotLc(String),
    #[error("weight is not in the lattice N of the germ")]
    NotInLattice,
    #[error("bad corpus line: {0}")]
    BadCorpusLine(String),
}
