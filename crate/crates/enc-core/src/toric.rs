//! Cyclic quotient singularities: log discrepancies, mlds, the
//! exceptionally-non-canonical test, and the mld of a pair with monomial
//! boundary.
//!
//! A germ `1/r(a_1,...,a_d)` carries the lattice
//! `N = Z^d + Z*(a_1/r,...,a_d/r)` intersected with the first orthant.
//! Every class of `N` modulo `Z^d` has a unique representative with
//! coordinates in `[0,1)`, the fractional vector `alpha_k`; every point of
//! `N` in the orthant is `alpha_k + m` with `m >= 0` integral. Invariant
//! divisors over the germ whose center is the origin correspond to the
//! lattice points with all coordinates positive, and the log discrepancy of
//! such a point is its coordinate sum.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, reduce_mod};
use crate::error::ToricError;
use crate::exact::{MonomialSupport, Rat, Weight};

/// Cyclic quotient germ `1/r(a_1,...,a_d)` with the `a_i` reduced to `[0, r)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuotient {
    r: u64,
    a: Vec<u64>,
}

impl CyclicQuotient {
    pub fn new(r: u64, a: &[i64]) -> Self {
        assert!(r >= 1, "group order must be positive");
        CyclicQuotient {
            r,
            a: a.iter().map(|&ai| reduce_mod(ai, r)).collect(),
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Whether the quotient is an isolated singularity (or smooth, `r = 1`).
    ///
    /// For `d = 3` the action of every nontrivial group element must be free
    /// outside the origin, i.e. every `a_i` is a unit mod `r`. In higher
    /// dimension we only require the pairwise condition
    /// `gcd(a_i, a_j, r) = 1`, which is what the hyperquotient setting needs.
    pub fn is_isolated(&self) -> bool {
        if self.r == 1 {
            return true;
        }
        if self.dim() == 3 {
            self.a.iter().all(|&ai| gcd(ai, self.r) == 1)
        } else {
            let d = self.dim();
            (0..d).all(|i| (i + 1..d).all(|j| gcd(gcd(self.a[i], self.a[j]), self.r) == 1))
        }
    }

    fn require_isolated(&self) -> Result<(), ToricError> {
        if self.is_isolated() {
            Ok(())
        } else {
            Err(ToricError::NotIsolated {
                r: self.r,
                a: self
                    .a
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                reason: "group action is not free outside the origin".into(),
            })
        }
    }

    /// The fractional vector `alpha_k = ({k a_1 / r}, ..., {k a_d / r})`.
    pub fn alpha(&self, k: u64) -> Weight {
        let nums = self.alpha_numerators(k);
        Weight::new(
            nums.iter()
                .map(|&n| Rat::from_pair(n as i64, self.r as i64))
                .collect(),
        )
        .expect("fractional parts are non-negative")
    }

    /// Numerators of `alpha_k` over the common denominator `r`.
    pub fn alpha_numerators(&self, k: u64) -> Vec<u64> {
        self.a.iter().map(|&ai| k % self.r * ai % self.r).collect()
    }

    /// Scaled log-discrepancy term of Lemma-style toric calculus:
    /// `r * (1 + k a_i / r - ceil(k a_i / r))`, which is `k a_i mod r`
    /// when `r` does not divide `k a_i` and `r` otherwise.
    fn ld_numerator(&self, k: u64) -> u64 {
        self.alpha_numerators(k)
            .iter()
            .map(|&n| if n == 0 { self.r } else { n })
            .sum()
    }

    /// Character of a monomial under the group action: `sum a_i m_i mod r`.
    pub fn character(&self, m: &crate::exact::Monomial) -> u64 {
        m.exponents()
            .iter()
            .zip(&self.a)
            .fold(0u64, |acc, (&e, &ai)| (acc + e as u64 % self.r * ai) % self.r)
    }
}

impl std::fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "1/{}({})",
            self.r,
            self.a
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

impl std::fmt::Debug for CyclicQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// An invariant divisor over the germ, recorded by its class index `k`,
/// its lattice point, and the log discrepancy (the coordinate sum).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricDivisorRecord {
    pub k: u64,
    pub alpha: Weight,
    pub log_discrepancy: Rat,
}

impl std::fmt::Debug for ToricDivisorRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(k={}, {}, ld={})", self.k, self.alpha, self.log_discrepancy)
    }
}

/// `mld(X at x)` of the germ. Smooth germs (`r = 1`) return the dimension.
pub fn mld_cyclic_quotient(x: &CyclicQuotient) -> Result<Rat, ToricError> {
    x.require_isolated()?;
    if x.r() == 1 {
        return Ok(Rat::from_integer(x.dim() as i64));
    }
    let min_num = (1..x.r()).map(|k| x.ld_numerator(k)).min().expect("r >= 2");
    Ok(Rat::from_pair(min_num as i64, x.r() as i64))
}

/// Integer fast path: `r * mld` for an isolated germ with `r >= 2`, using
/// residue arithmetic only. Exposed for the sweep engines.
pub fn mld_numerator_scaled(r: u64, a: &[u64]) -> u64 {
    debug_assert!(r >= 2);
    let mut best = u64::MAX;
    let mut residues: Vec<u64> = a.iter().map(|&ai| ai % r).collect();
    let step: Vec<u64> = residues.clone();
    for _k in 1..r {
        let mut sum = 0;
        for (res, st) in residues.iter_mut().zip(&step) {
            // residue of k*a_i, maintained incrementally
            let v = *res;
            sum += if v == 0 { r } else { v };
            let next = v + st;
            *res = if next >= r { next - r } else { next };
        }
        if sum < best {
            best = sum;
        }
    }
    best
}

/// All divisor records with every coordinate positive and log discrepancy
/// at most `threshold`, sorted by log discrepancy, then class index, then
/// lattice point. Classes `k = 1..r-1` are searched together with integer
/// shifts when `threshold > 1`; each unit shift raises the coordinate sum
/// by exactly 1, so shifts with `|m|_1` beyond `threshold` cannot appear.
pub fn low_discrepancy_divisors(
    x: &CyclicQuotient,
    threshold: &Rat,
) -> Result<Vec<ToricDivisorRecord>, ToricError> {
    x.require_isolated()?;
    let mut out = Vec::new();
    let d = x.dim();
    for k in 1..x.r() {
        let nums = x.alpha_numerators(k);
        let base_ld = Rat::from_pair(nums.iter().sum::<u64>() as i64, x.r() as i64);
        // minimal shift lifts zero coordinates to 1
        let zeros: Vec<usize> = (0..d).filter(|&i| nums[i] == 0).collect();
        let slack = threshold - &base_ld - Rat::from_integer(zeros.len() as i64);
        if slack.is_negative() {
            continue;
        }
        let budget = slack.floor();
        let extra_budget: u64 = budget.numer().try_into().unwrap_or(0);
        let mut shift = vec![0u64; d];
        for (i, z) in zeros.iter().enumerate() {
            shift[*z] = 1;
            let _ = i;
        }
        enumerate_shifts(&mut shift, 0, extra_budget, &mut |m| {
            let coords: Vec<Rat> = (0..d)
                .map(|i| Rat::from_pair((nums[i] + m[i] * x.r()) as i64, x.r() as i64))
                .collect();
            let alpha = Weight::new(coords).expect("non-negative");
            let ld = alpha.coord_sum();
            if &ld <= threshold && alpha.is_interior() {
                out.push(ToricDivisorRecord {
                    k,
                    alpha,
                    log_discrepancy: ld,
                });
            }
        });
    }
    out.sort_by(|p, q| {
        p.log_discrepancy
            .cmp(&q.log_discrepancy)
            .then(p.k.cmp(&q.k))
            .then(p.alpha.cmp(&q.alpha))
    });
    Ok(out)
}

/// Visits every shift `base + m` with `|m|_1 <= budget` added on top of the
/// preset entries of `base`.
fn enumerate_shifts(base: &mut Vec<u64>, idx: usize, budget: u64, visit: &mut impl FnMut(&[u64])) {
    if idx == base.len() {
        visit(base);
        return;
    }
    for extra in 0..=budget {
        base[idx] += extra;
        enumerate_shifts(base, idx + 1, budget - extra, visit);
        base[idx] -= extra;
    }
}

/// The enc test: exactly one invariant divisor with log discrepancy at most
/// 1, and that one strictly below 1.
pub fn is_enc_cyclic_quotient(
    x: &CyclicQuotient,
) -> Result<(bool, Option<ToricDivisorRecord>), ToricError> {
    x.require_isolated()?;
    if x.r() == 1 {
        return Ok((false, None));
    }
    let one = Rat::one();
    let mut low: Option<ToricDivisorRecord> = None;
    for k in 1..x.r() {
        let nums = x.alpha_numerators(k);
        if nums.iter().any(|&n| n == 0) {
            // center not the closed point; shifts of this class have ld > 1
            continue;
        }
        let sum: u64 = nums.iter().sum();
        if sum <= x.r() {
            let rec = ToricDivisorRecord {
                k,
                alpha: x.alpha(k),
                log_discrepancy: Rat::from_pair(sum as i64, x.r() as i64),
            };
            if low.is_some() {
                return Ok((false, None));
            }
            low = Some(rec);
        }
    }
    match low {
        Some(rec) if rec.log_discrepancy < one => Ok((true, Some(rec))),
        _ => Ok((false, None)),
    }
}

/// Boundary `B = sum b_i B_i` with each component cut out by a monomial
/// support. Coefficients lie in `[0, 1]` and their sum is at most the
/// ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    components: Vec<(Rat, MonomialSupport)>,
}

impl Boundary {
    pub fn new(components: Vec<(Rat, MonomialSupport)>, dim: usize) -> Result<Self, ToricError> {
        let mut sum = Rat::zero();
        for (b, _) in &components {
            if b.is_negative() || *b > Rat::one() {
                return Err(ToricError::BadCoefficient(b.to_string()));
            }
            sum += b.clone();
        }
        if sum > Rat::from_integer(dim as i64) {
            return Err(ToricError::CoefficientSumTooLarge {
                sum: sum.to_string(),
                dim,
            });
        }
        Ok(Boundary { components })
    }

    pub fn empty() -> Self {
        Boundary { components: vec![] }
    }

    pub fn components(&self) -> &[(Rat, MonomialSupport)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Common character of a support under the group action, or `None` when the
/// monomials disagree (the function is not semi-invariant).
pub fn check_semi_invariance(x: &CyclicQuotient, f: &MonomialSupport) -> Option<u64> {
    let mut chars = f.monomials().iter().map(|m| x.character(m));
    let first = chars.next()?;
    if chars.all(|c| c == first) {
        Some(first)
    } else {
        None
    }
}

/// `mld(X at x, B) = mld(X at x) - sum b_i w(f_i)` where `w` is the weight
/// of the unique low divisor of the enc germ `X`. Only valid in the enc
/// regime; refuses otherwise. A non-positive result means the pair is not
/// klt and is reported as an error.
pub fn mld_with_boundary(x: &CyclicQuotient, b: &Boundary) -> Result<Rat, ToricError> {
    let (enc, witness) = is_enc_cyclic_quotient(x)?;
    if !enc {
        return Err(ToricError::NotEnc);
    }
    let witness = witness.expect("enc germ has a witness");
    let w = &witness.alpha;
    let mut result = witness.log_discrepancy.clone();
    for (coeff, support) in b.components() {
        let chars: Vec<u64> = support.monomials().iter().map(|m| x.character(m)).collect();
        if let Some((&c0, rest)) = chars.split_first() {
            if let Some(&bad) = rest.iter().find(|&&c| c != c0) {
                return Err(ToricError::NotSemiInvariant(c0, bad));
            }
        }
        let wf = w.of_series(support).map_err(ToricError::Core)?;
        result -= coeff * &wf;
    }
    if result.is_negative() || result.is_zero() {
        return Err(ToricError::NotKlt(result.to_string()));
    }
    Ok(result)
}
