//! Weight vectors, monomials, and finite monomial supports.
//!
//! A weight assigns an exact rational to each coordinate; the weight of a
//! monomial is the corresponding linear functional, and the weight of a
//! finite support is the minimum over its monomials. Supports are the
//! finitely many monomials of an analytic function that the caller has
//! decided are relevant; the optional truncation degree records the
//! caller's claim that every omitted monomial has total degree larger than
//! it. That claim is a contract on the caller — this module records it but
//! cannot check it.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;
use crate::exact::rat::Rat;

/// Weight vector in `Q^d_{>=0}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    coords: Vec<Rat>,
}

impl Weight {
    pub fn new(coords: Vec<Rat>) -> Result<Self, CoreError> {
        if coords.is_empty() {
            return Err(CoreError::EmptyWeight);
        }
        if let Some(c) = coords.iter().find(|c| c.is_negative()) {
            return Err(CoreError::NegativeCoordinate(c.to_string()));
        }
        Ok(Weight { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    /// Sum of the coordinates, i.e. the weight of `x_1 x_2 ... x_d`.
    pub fn coord_sum(&self) -> Rat {
        let mut s = Rat::zero();
        for c in &self.coords {
            s += c.clone();
        }
        s
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|c| !c.is_zero())
    }

    /// `({j a_1 / r}, ..., {j a_d / r})`.
    pub fn fractional_vector(r: u64, a: &[i64], j: i64) -> Self {
        assert!(r >= 1);
        let coords = a
            .iter()
            .map(|&ai| {
                (Rat::from_integer(j) * Rat::from_integer(ai) / Rat::from_integer(r as i64)).frac()
            })
            .collect();
        Weight { coords }
    }

    /// `w(x^m) = sum_i w_i m_i`.
    pub fn of_monomial(&self, m: &Monomial) -> Result<Rat, CoreError> {
        if m.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim(),
                got: m.dim(),
            });
        }
        let mut s = Rat::zero();
        for (c, &e) in self.coords.iter().zip(m.exponents()) {
            if e != 0 {
                s += c * &Rat::from_integer(e as i64);
            }
        }
        Ok(s)
    }

    /// `w(f) = min { w(x^m) : m in supp f }`.
    pub fn of_series(&self, f: &MonomialSupport) -> Result<Rat, CoreError> {
        let mut best: Option<Rat> = None;
        for m in f.monomials() {
            let v = self.of_monomial(m)?;
            best = Some(match best {
                None => v,
                Some(b) => b.min(v),
            });
        }
        best.ok_or(CoreError::EmptySupport)
    }

    /// `(1,...,1) - w`; defined only when every coordinate lies in `[0, 1]`.
    pub fn complement(&self) -> Result<Weight, CoreError> {
        let one = Rat::one();
        if let Some(c) = self.coords.iter().find(|c| **c > one) {
            return Err(CoreError::CoordinateAboveOne(c.to_string()));
        }
        Ok(Weight {
            coords: self.coords.iter().map(|c| &one - c).collect(),
        })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exponent vector of a monomial; the corpus form is `e1.e2.e3[.e4]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "empty exponent vector");
        Monomial { exponents }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Exponent-wise product of monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.dim(), other.dim());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(other.exponents())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Indices of the variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Monomial {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, CoreError> {
        let exps: Result<Vec<u32>, _> = s.trim().split('.').map(|p| p.parse::<u32>()).collect();
        match exps {
            Ok(v) if !v.is_empty() => Ok(Monomial::new(v)),
            _ => Err(CoreError::BadMonomial(s.into())),
        }
    }
}

/// Finite, non-empty, deduplicated set of monomials of one ambient dimension.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSupport {
    monomials: Vec<Monomial>,
    truncation_degree: Option<u32>,
}

impl MonomialSupport {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self, CoreError> {
        Self::with_truncation(monomials, None)
    }

    pub fn with_truncation(
        monomials: Vec<Monomial>,
        truncation_degree: Option<u32>,
    ) -> Result<Self, CoreError> {
        if monomials.is_empty() {
            return Err(CoreError::EmptySupport);
        }
        let dim = monomials[0].dim();
        if monomials.iter().any(|m| m.dim() != dim) {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: monomials.iter().map(|m| m.dim()).find(|&d| d != dim).unwrap(),
            });
        }
        if let Some(d) = truncation_degree {
            if let Some(m) = monomials.iter().find(|m| m.total_degree() > d) {
                return Err(CoreError::MonomialBeyondTruncation {
                    monomial: m.to_string(),
                    degree: d,
                });
            }
        }
        let set: BTreeSet<Monomial> = monomials.into_iter().collect();
        Ok(MonomialSupport {
            monomials: set.into_iter().collect(),
            truncation_degree,
        })
    }

    pub fn dim(&self) -> usize {
        self.monomials[0].dim()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn truncation_degree(&self) -> Option<u32> {
        self.truncation_degree
    }

    pub fn union(&self, other: &MonomialSupport) -> Result<MonomialSupport, CoreError> {
        let mut all = self.monomials.clone();
        all.extend(other.monomials().iter().cloned());
        let trunc = match (self.truncation_degree, other.truncation_degree) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        MonomialSupport::with_truncation(all, trunc)
    }
}

impl fmt::Debug for MonomialSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.monomials.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::from_pair(p, q)
    }

    fn w(coords: &[(i64, i64)]) -> Weight {
        Weight::new(coords.iter().map(|&(p, q)| r(p, q)).collect()).unwrap()
    }

    fn mon(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn fractional_vector_examples() {
        assert_eq!(
            Weight::fractional_vector(13, &[3, 4, 5], 1),
            w(&[(3, 13), (4, 13), (5, 13)])
        );
        assert_eq!(
            Weight::fractional_vector(13, &[3, 4, 5], 2),
            w(&[(6, 13), (8, 13), (10, 13)])
        );
        assert_eq!(
            Weight::fractional_vector(5, &[2, 3, 1, 0], 4),
            w(&[(3, 5), (2, 5), (4, 5), (0, 1)])
        );
    }

    #[test]
    fn weight_of_monomial_examples() {
        let w1 = w(&[(1, 3), (1, 3), (2, 3)]);
        assert_eq!(w1.of_monomial(&mon(&[0, 0, 2])).unwrap(), r(4, 3));

        let w2 = w(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(
            w2.of_monomial(&mon(&[1, 1, 1, 1])).unwrap(),
            Rat::from_integer(2)
        );

        // 3*(3/13) + 4/13 = 13/13 = 1
        let w3 = w(&[(3, 13), (4, 13), (5, 13)]);
        assert_eq!(w3.of_monomial(&mon(&[3, 1, 0])).unwrap(), Rat::one());
    }

    #[test]
    fn weight_of_monomial_dimension_mismatch() {
        let w1 = w(&[(1, 3), (1, 3)]);
        assert!(w1.of_monomial(&mon(&[1, 1, 1])).is_err());
    }

    #[test]
    fn weight_of_series_examples() {
        let w1 = w(&[(1, 3), (1, 3), (2, 3)]);
        let f = MonomialSupport::new(vec![mon(&[1, 1, 0]), mon(&[0, 0, 2])]).unwrap();
        assert_eq!(w1.of_series(&f).unwrap(), r(2, 3));

        let w2 = w(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        let f2 = MonomialSupport::new(vec![mon(&[2, 0, 0, 0]), mon(&[0, 3, 0, 0])]).unwrap();
        assert_eq!(w2.of_series(&f2).unwrap(), Rat::one());

        // All three monomials have weight 1 under (3/13, 4/13, 5/13).
        let w3 = w(&[(3, 13), (4, 13), (5, 13)]);
        let f3 = MonomialSupport::new(vec![mon(&[3, 1, 0]), mon(&[0, 2, 1]), mon(&[1, 0, 2])])
            .unwrap();
        assert_eq!(w3.of_series(&f3).unwrap(), Rat::one());
    }

    #[test]
    fn empty_support_rejected() {
        assert!(MonomialSupport::new(vec![]).is_err());
    }

    #[test]
    fn truncation_rejects_oversized_monomial() {
        let res = MonomialSupport::with_truncation(vec![mon(&[4, 0, 0])], Some(3));
        assert!(res.is_err());
        assert!(MonomialSupport::with_truncation(vec![mon(&[3, 0, 0])], Some(3)).is_ok());
    }

    #[test]
    fn complement_examples() {
        let a = Weight::new(vec![r(3, 13), r(4, 13), r(5, 13), r(0, 1)]).unwrap();
        assert_eq!(
            a.complement().unwrap(),
            w(&[(10, 13), (9, 13), (8, 13), (1, 1)])
        );

        let half = w(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(half.complement().unwrap(), half);

        let b = w(&[(1, 1), (0, 1), (1, 1), (0, 1)]);
        assert_eq!(b.complement().unwrap(), w(&[(0, 1), (1, 1), (0, 1), (1, 1)]));

        let too_big = w(&[(3, 2), (1, 2)]);
        assert!(too_big.complement().is_err());
    }

    #[test]
    fn monomial_parse_display() {
        let m: Monomial = "3.1.0".parse().unwrap();
        assert_eq!(m, mon(&[3, 1, 0]));
        assert_eq!(m.to_string(), "3.1.0");
        assert!("3.x.0".parse::<Monomial>().is_err());
    }
}
