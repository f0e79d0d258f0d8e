//! Exact rational scalars.
//!
//! Every numeric quantity in this crate is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. There is no
//! floating point anywhere; equality and ordering are exact. On the wire
//! (CLI flags, CSV, JSON) a rational is the string `p/q`, or just `p` when
//! the denominator is 1. Decimal and exponent literals are rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::CoreError;

/// Exact rational number, always normalized (lowest terms, denominator > 0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, CoreError> {
        if denom.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` from machine integers; `q` must be nonzero.
    pub fn from_pair(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn ceil(&self) -> Rat {
        Rat(self.0.ceil())
    }

    /// Fractional part `{q} = q - floor(q)`, always in `[0, 1)`.
    pub fn frac(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = CoreError;

    /// Parses `p`, `p/q`, with optional leading `-`. Anything that looks
    /// like a float (`.`, `e`, `E`) is rejected: the artifact is exact.
    fn from_str(s: &str) -> Result<Self, CoreError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CoreError::BadRational(s.into()));
        }
        if s.contains(['.', 'e', 'E']) {
            return Err(CoreError::BadRational(s.into()));
        }
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer = BigInt::from_str(num_str).map_err(|_| CoreError::BadRational(s.into()))?;
        let denom = BigInt::from_str(den_str).map_err(|_| CoreError::BadRational(s.into()))?;
        if denom.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rat::from_str(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::from_pair(p, q)
    }

    #[test]
    fn frac_basics() {
        assert_eq!(r(7, 3).frac(), r(1, 3));
        assert_eq!(r(-1, 4).frac(), r(3, 4));
        assert_eq!(Rat::from_integer(2).frac(), Rat::zero());
    }

    #[test]
    fn normalization() {
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(3, -6), r(-1, 2));
        assert_eq!(r(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn display_integer_bare() {
        assert_eq!(Rat::from_integer(3).to_string(), "3");
        assert_eq!(r(12, 13).to_string(), "12/13");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "3", "-7", "12/13", "-5/9", "100/1"] {
            let v: Rat = s.parse().unwrap();
            let back: Rat = v.to_string().parse().unwrap();
            assert_eq!(v, back);
        }
        assert_eq!("100/1".parse::<Rat>().unwrap().to_string(), "100");
    }

    #[test]
    fn rejects_floats_and_garbage() {
        assert!("0.5".parse::<Rat>().is_err());
        assert!("1e3".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("a/b".parse::<Rat>().is_err());
    }

    #[test]
    fn frac_contract() {
        // 0 <= frac(q) < 1 and q - frac(q) integral, spot-checked widely here,
        // property-tested in tests/properties.rs.
        for p in -20i64..=20 {
            for q in 1i64..=9 {
                let v = r(p, q);
                let f = v.frac();
                assert!(!f.is_negative() && f < Rat::one());
                assert!((v - f).is_integer());
            }
        }
    }
}
