//! Hyperquotient germs `(f = 0) in C^4 / (1/r)(a_1..a_4)` and the validation
//! of the arithmetic and semi-invariance conditions they must satisfy.
//!
//! The germ data is `(r; a_1..a_4; e; f-type; supp g)`. The leading part of
//! `f` is fixed by the type — `x1 x2` for cA, `x1^2 + x2^2` for odd,
//! `x1^2` for cD-E — and `g` collects the finitely many non-leading
//! monomials the caller chooses to model. An empty `g` asserts, via the
//! truncation contract, that no omitted monomial ever undercuts the listed
//! minimum for the weights that get queried.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::arith::{gcd, reduce_mod, units};
use crate::error::HyperError;
use crate::exact::{Monomial, MonomialSupport, Rat, Weight};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum FType {
    #[serde(rename = "cA")]
    CA,
    #[serde(rename = "odd")]
    Odd,
    #[serde(rename = "cDE")]
    CDE,
}

impl FType {
    pub fn token(self) -> &'static str {
        match self {
            FType::CA => "cA",
            FType::Odd => "odd",
            FType::CDE => "cDE",
        }
    }

    /// Leading monomials of `f` for this type.
    pub fn leading_monomials(self) -> Vec<Monomial> {
        match self {
            FType::CA => vec![Monomial::new(vec![1, 1, 0, 0])],
            FType::Odd => vec![Monomial::new(vec![2, 0, 0, 0]), Monomial::new(vec![0, 2, 0, 0])],
            FType::CDE => vec![Monomial::new(vec![2, 0, 0, 0])],
        }
    }

    /// Variables allowed in `g` (0-based indices) and its minimal degree.
    pub fn g_shape(self) -> (&'static [usize], u32) {
        match self {
            FType::CA => (&[2, 3], 2),
            FType::Odd => (&[2, 3], 3),
            FType::CDE => (&[1, 2, 3], 3),
        }
    }
}

impl FromStr for FType {
    type Err = HyperError;
    fn from_str(s: &str) -> Result<Self, HyperError> {
        match s {
            "cA" => Ok(FType::CA),
            "odd" => Ok(FType::Odd),
            "cDE" => Ok(FType::CDE),
            other => Err(HyperError::BadCorpusLine(format!("unknown f-type `{other}`"))),
        }
    }
}

/// A `(r; a; e; f-type; supp g)` germ. Construction reduces everything mod
/// `r` and sorts/dedups the support; validity is a separate, diagnostic
/// check ([`HyperquotientGerm::validate`]).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperquotientGerm {
    r: u64,
    a: [u64; 4],
    e: u64,
    f_type: FType,
    g_support: Vec<Monomial>,
    truncation_degree: Option<u32>,
}

impl HyperquotientGerm {
    pub fn new(
        r: u64,
        a: [i64; 4],
        e: i64,
        f_type: FType,
        g_support: Vec<Monomial>,
        truncation_degree: Option<u32>,
    ) -> Self {
        let mut g: Vec<Monomial> = g_support;
        g.sort();
        g.dedup();
        HyperquotientGerm {
            r,
            a: [
                reduce_mod(a[0], r),
                reduce_mod(a[1], r),
                reduce_mod(a[2], r),
                reduce_mod(a[3], r),
            ],
            e: reduce_mod(e, r),
            f_type,
            g_support: g,
            truncation_degree,
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn a(&self) -> [u64; 4] {
        self.a
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn f_type(&self) -> FType {
        self.f_type
    }

    pub fn g_support(&self) -> &[Monomial] {
        &self.g_support
    }

    pub fn truncation_degree(&self) -> Option<u32> {
        self.truncation_degree
    }

    /// Full support of `f`: the leading monomials plus `g`. Never empty.
    pub fn f_support(&self) -> MonomialSupport {
        let mut mons = self.f_type.leading_monomials();
        mons.extend(self.g_support.iter().cloned());
        MonomialSupport::new(mons).expect("leading monomials are non-empty")
    }

    /// Character `sum a_i m_i mod r` of a monomial.
    pub fn character(&self, m: &Monomial) -> u64 {
        m.exponents()
            .iter()
            .zip(&self.a)
            .fold(0u64, |acc, (&e, &ai)| (acc + e as u64 % self.r * ai) % self.r)
    }

    /// The fractional vector `alpha_j`, as numerators over `r`.
    pub fn alpha_numerators(&self, j: u64) -> [u64; 4] {
        [
            j % self.r * self.a[0] % self.r,
            j % self.r * self.a[1] % self.r,
            j % self.r * self.a[2] % self.r,
            j % self.r * self.a[3] % self.r,
        ]
    }

    pub fn alpha(&self, j: u64) -> Weight {
        let n = self.alpha_numerators(j);
        Weight::new(
            n.iter()
                .map(|&x| Rat::from_pair(x as i64, self.r as i64))
                .collect(),
        )
        .expect("non-negative")
    }

    /// Relabel the group generator: `a -> j a`, `e -> j e` for a unit `j`.
    /// The analytic data (the monomials of `g`) is unchanged.
    pub fn relabel(&self, j: u64) -> Self {
        assert_eq!(gcd(j, self.r), 1, "relabeling needs a unit");
        HyperquotientGerm {
            r: self.r,
            a: [
                self.a[0] * j % self.r,
                self.a[1] * j % self.r,
                self.a[2] * j % self.r,
                self.a[3] * j % self.r,
            ],
            e: self.e * j % self.r,
            f_type: self.f_type,
            g_support: self.g_support.clone(),
            truncation_degree: self.truncation_degree,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let r = self.r;
        let mut checks = Vec::new();

        let cond_a = (0..4).all(|i| gcd(self.e, r) % gcd(self.a[i], r) == 0);
        checks.push(SettingCheck {
            name: "gcd-divides".into(),
            passed: cond_a,
            detail: "gcd(a_i, r) divides gcd(e, r) for every i".into(),
        });

        let cond_b = (0..4).all(|i| ((i + 1)..4).all(|j| gcd(gcd(self.a[i], self.a[j]), r) == 1));
        checks.push(SettingCheck {
            name: "pairwise-coprime".into(),
            passed: cond_b,
            detail: "gcd(a_i, a_j, r) = 1 for every i < j".into(),
        });

        let sum: u64 = self.a.iter().sum();
        let cond_c = sum % r == (self.e + 1) % r;
        checks.push(SettingCheck {
            name: "sum-congruence".into(),
            passed: cond_c,
            detail: format!("a_1+a_2+a_3+a_4 - e = {} mod {r}, expected 1", (sum + r - self.e % r) % r),
        });

        let leading_ok = match self.f_type {
            FType::CA => (self.a[0] + self.a[1]) % r == self.e % r,
            FType::Odd => {
                2 * self.a[0] % r == self.e % r
                    && 2 * self.a[1] % r == self.e % r
                    && self.a[0] % r != self.a[1] % r
            }
            FType::CDE => 2 * self.a[0] % r == self.e % r,
        };
        checks.push(SettingCheck {
            name: "leading-monomials".into(),
            passed: leading_ok,
            detail: format!("leading part of a {} germ is semi-invariant of character e", self.f_type.token()),
        });

        let g_char_ok = self.g_support.iter().all(|m| self.character(m) == self.e % r);
        checks.push(SettingCheck {
            name: "g-semi-invariance".into(),
            passed: g_char_ok,
            detail: "every monomial of g has character e".into(),
        });

        let (vars, min_deg) = self.f_type.g_shape();
        let g_shape_ok = self.g_support.iter().all(|m| {
            m.total_degree() >= min_deg && m.support_vars().iter().all(|v| vars.contains(v))
        });
        checks.push(SettingCheck {
            name: "g-shape".into(),
            passed: g_shape_ok,
            detail: format!(
                "g lives in the allowed variables with total degree >= {min_deg}"
            ),
        });

        // the excluded shape is read up to the coordinate swaps the cA
        // leading part allows (x1 <-> x2 fixes the form, x3 <-> x4 does not)
        let excluded = self.f_type == FType::CA
            && self.e == 0
            && (self.a[2..4] == [1 % r, 0] || self.a[2..4] == [0, 1 % r])
            && units(r)
                .iter()
                .any(|&u| self.a[0] == u && self.a[1] == (r - u) % r);
        checks.push(SettingCheck {
            name: "cA-exclusion".into(),
            passed: !excluded,
            detail: "(a, -a, 1, 0; 0) with a a unit is excluded for cA".into(),
        });

        ValidationReport { checks }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// One-line corpus form `r;a1,a2,a3,a4;e;ftype;mon mon ...`.
    pub fn to_corpus_line(&self) -> String {
        let mons = self
            .g_support
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "{};{};{};{};{}",
            self.r,
            self.a.map(|x| x.to_string()).join(","),
            self.e,
            self.f_type.token(),
            mons
        )
    }

    pub fn from_corpus_line(line: &str) -> Result<Self, HyperError> {
        let parts: Vec<&str> = line.trim().split(';').collect();
        if parts.len() != 5 {
            return Err(HyperError::BadCorpusLine(format!(
                "expected 5 `;`-separated fields, got {}",
                parts.len()
            )));
        }
        let r: u64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| HyperError::BadCorpusLine(format!("bad r `{}`", parts[0])))?;
        if r == 0 {
            return Err(HyperError::BadCorpusLine("r must be positive".into()));
        }
        let a_vals: Vec<i64> = parts[1]
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| HyperError::BadCorpusLine(format!("bad a `{}`", parts[1])))?;
        if a_vals.len() != 4 {
            return Err(HyperError::BadCorpusLine(format!(
                "expected 4 weights, got {}",
                a_vals.len()
            )));
        }
        let e: i64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| HyperError::BadCorpusLine(format!("bad e `{}`", parts[2])))?;
        let f_type: FType = parts[3].trim().parse()?;
        let mons: Vec<Monomial> = parts[4]
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Monomial>()
                    .map_err(|_| HyperError::BadCorpusLine(format!("bad monomial `{tok}`")))
            })
            .collect::<Result<_, _>>()?;
        if let Some(m) = mons.iter().find(|m| m.dim() != 4) {
            return Err(HyperError::BadCorpusLine(format!(
                "monomial `{m}` is not 4-dimensional"
            )));
        }
        Ok(HyperquotientGerm::new(
            r,
            [a_vals[0], a_vals[1], a_vals[2], a_vals[3]],
            e,
            f_type,
            mons,
            None,
        ))
    }
}

impl fmt::Display for HyperquotientGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_corpus_line())
    }
}

impl fmt::Debug for HyperquotientGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_corpus_line())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SettingCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<SettingCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&SettingCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn failure_summary(&self) -> String {
        self.failures()
            .iter()
            .map(|c| c.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}
