//! Wire records and parsing helpers: germ descriptors, boundary
//! descriptors, and the mld record with its recomputation check.
//!
//! Everything on the wire is an exact rational (`p/q`) or an exponent
//! vector (`e1.e2.e3[.e4]`); boundary specs are comma-separated
//! `coeff:mon+mon+...` components.

use enc_core::exact::{Monomial, MonomialSupport, Rat};
use enc_core::toric::{
    is_enc_cyclic_quotient, mld_cyclic_quotient, mld_with_boundary, Boundary, CyclicQuotient,
};
use serde::{Deserialize, Serialize};

pub fn parse_weights(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad weight `{p}` in `{s}`"))
        })
        .collect()
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(|p| parse_rat(p.trim())).collect()
}

pub fn parse_monomials(s: &str, dim: usize) -> Result<Vec<Monomial>, String> {
    s.split_whitespace()
        .map(|tok| {
            let m = tok
                .parse::<Monomial>()
                .map_err(|_| format!("bad monomial `{tok}`"))?;
            if m.dim() != dim {
                return Err(format!("monomial `{tok}` is not {dim}-dimensional"));
            }
            Ok(m)
        })
        .collect()
}

/// `coeff:mon+mon,coeff:mon` boundary spec.
pub fn parse_boundary(s: &str, dim: usize) -> Result<Boundary, String> {
    let mut components = Vec::new();
    for part in s.split(',') {
        let (coeff_str, mons_str) = part
            .split_once(':')
            .ok_or_else(|| format!("boundary component `{part}` is not `coeff:monomials`"))?;
        let coeff = parse_rat(coeff_str)?;
        let mons: Result<Vec<Monomial>, String> = mons_str
            .split('+')
            .map(|tok| {
                let m = tok
                    .trim()
                    .parse::<Monomial>()
                    .map_err(|_| format!("bad monomial `{tok}`"))?;
                if m.dim() != dim {
                    return Err(format!("monomial `{tok}` is not {dim}-dimensional"));
                }
                Ok(m)
            })
            .collect();
        let support = MonomialSupport::new(mons?).map_err(|e| e.to_string())?;
        components.push((coeff, support));
    }
    Boundary::new(components, dim).map_err(|e| e.to_string())
}

pub fn boundary_descriptor(b: &Boundary) -> String {
    b.components()
        .iter()
        .map(|(c, s)| {
            let mons = s
                .monomials()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join("+");
            format!("{c}:{mons}")
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// One mld computation, self-describing: re-parsing the descriptors and
/// recomputing must reproduce the record exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MldRecord {
    pub germ: String,
    pub boundary: String,
    pub mld: Rat,
    pub enc: bool,
    pub witness_k: Option<u64>,
}

impl MldRecord {
    pub fn compute(x: &CyclicQuotient, b: &Boundary) -> Result<MldRecord, String> {
        let (enc, witness) = is_enc_cyclic_quotient(x).map_err(|e| e.to_string())?;
        let mld = if b.is_empty() {
            mld_cyclic_quotient(x).map_err(|e| e.to_string())?
        } else {
            mld_with_boundary(x, b).map_err(|e| e.to_string())?
        };
        Ok(MldRecord {
            germ: format!(
                "{};{}",
                x.r(),
                x.a()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            boundary: boundary_descriptor(b),
            mld,
            enc,
            witness_k: witness.map(|w| w.k),
        })
    }

    pub fn parse_germ(&self) -> Result<CyclicQuotient, String> {
        let (r_str, a_str) = self
            .germ
            .split_once(';')
            .ok_or_else(|| format!("bad germ descriptor `{}`", self.germ))?;
        let r: u64 = r_str.parse().map_err(|_| format!("bad r `{r_str}`"))?;
        let a = parse_weights(a_str)?;
        Ok(CyclicQuotient::new(r, &a))
    }

    /// Recompute from the descriptors; the result must equal `self`.
    pub fn recompute(&self) -> Result<MldRecord, String> {
        let x = self.parse_germ()?;
        let b = if self.boundary.is_empty() {
            Boundary::empty()
        } else {
            parse_boundary(&self.boundary, x.dim())?
        };
        MldRecord::compute(&x, &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_round_trip() {
        let b = parse_boundary("1/2:1.1.1+0.2.0,1:1.0.0", 3).unwrap();
        assert_eq!(b.components().len(), 2);
        let desc = boundary_descriptor(&b);
        let b2 = parse_boundary(&desc, 3).unwrap();
        assert_eq!(b, b2);
    }

    #[test]
    fn record_round_trip() {
        let x = CyclicQuotient::new(13, &[3, 4, 5]);
        let b = parse_boundary("1/2:1.1.1", 3).unwrap();
        let rec = MldRecord::compute(&x, &b).unwrap();
        assert_eq!(rec.mld, Rat::from_pair(6, 13));
        assert!(rec.enc);
        assert_eq!(rec.witness_k, Some(1));
        assert_eq!(rec.recompute().unwrap(), rec);
    }

    #[test]
    fn rejects_float_literals() {
        assert!(parse_rat("0.5").is_err());
        assert!(parse_boundary("0.5:1.0.0", 3).is_err());
    }
}
