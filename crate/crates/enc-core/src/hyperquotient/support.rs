//! Default `g`-support instantiations for sweeps.
//!
//! The classification sweeps model the non-leading part of `f` two ways:
//! leading monomials only (an empty `g` under the truncation contract) and
//! leading monomials plus witness monomials — the minimal semi-invariant
//! pure powers in each allowed `g`-variable, capped in degree. The pure
//! powers are what the case analyses of the family arguments consume.

use crate::arith::gcd;
use crate::exact::Monomial;
use crate::hyperquotient::setting::HyperquotientGerm;

/// Minimal exponent `l >= min_deg` with `l * a_var = e (mod r)`, if one
/// exists at or below `cap`.
fn minimal_power(a_var: u64, e: u64, r: u64, min_deg: u32, cap: u32) -> Option<u32> {
    let g = gcd(a_var, r);
    if e % g != 0 {
        return None;
    }
    let r_red = r / g;
    // solve (a/g) l = (e/g) mod (r/g)
    let l0 = if r_red == 1 {
        0
    } else {
        let inv = crate::arith::mod_inverse(a_var / g, r_red)?;
        e / g % r_red * inv % r_red
    };
    // smallest representative >= min_deg
    let step = r_red.max(1);
    let mut l = l0;
    while l < min_deg as u64 {
        l += step;
    }
    (l <= cap as u64).then_some(l as u32)
}

/// Witness support: for each allowed `g`-variable the minimal
/// semi-invariant pure power of admissible degree, up to `cap`.
pub fn witness_pure_powers(germ: &HyperquotientGerm, cap: u32) -> Vec<Monomial> {
    let (vars, min_deg) = germ.f_type().g_shape();
    let a = germ.a();
    let mut out = Vec::new();
    for &v in vars {
        if let Some(l) = minimal_power(a[v], germ.e(), germ.r(), min_deg, cap) {
            let mut exps = vec![0u32; 4];
            exps[v] = l;
            out.push(Monomial::new(exps));
        }
    }
    out
}

/// Every semi-invariant monomial in the allowed `g`-variables with total
/// degree between the shape floor and `max_degree`.
pub fn semi_invariant_menu(germ: &HyperquotientGerm, max_degree: u32) -> Vec<Monomial> {
    let (vars, min_deg) = germ.f_type().g_shape();
    let mut out = Vec::new();
    let mut exps = vec![0u32; 4];
    fill_menu(germ, vars, 0, min_deg, max_degree, &mut exps, &mut out);
    out
}

fn fill_menu(
    germ: &HyperquotientGerm,
    vars: &[usize],
    idx: usize,
    min_deg: u32,
    max_degree: u32,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if idx == vars.len() {
        let deg: u32 = exps.iter().sum();
        if deg >= min_deg {
            let m = Monomial::new(exps.clone());
            if germ.character(&m) == germ.e() % germ.r() {
                out.push(m);
            }
        }
        return;
    }
    let used: u32 = exps.iter().sum();
    for v in 0..=(max_degree - used) {
        exps[vars[idx]] = v;
        fill_menu(germ, vars, idx + 1, min_deg, max_degree, exps, out);
    }
    exps[vars[idx]] = 0;
}

/// Degree ceiling for the dense part of the witness instantiation.
pub const MENU_DEGREE: u32 = 12;

/// The germ re-equipped with its witness support: the minimal pure powers
/// (degree cap `cap`) together with every semi-invariant monomial of
/// degree at most [`MENU_DEGREE`] in the allowed variables.
pub fn with_witness_support(germ: &HyperquotientGerm, cap: u32) -> HyperquotientGerm {
    let mut g = witness_pure_powers(germ, cap);
    g.extend(semi_invariant_menu(germ, MENU_DEGREE));
    HyperquotientGerm::new(
        germ.r(),
        germ.a().map(|x| x as i64),
        germ.e() as i64,
        germ.f_type(),
        g,
        None,
    )
}

/// The germ with only its leading monomials, truncation degree declared.
pub fn leading_only(germ: &HyperquotientGerm, truncation_degree: u32) -> HyperquotientGerm {
    HyperquotientGerm::new(
        germ.r(),
        germ.a().map(|x| x as i64),
        germ.e() as i64,
        germ.f_type(),
        vec![],
        Some(truncation_degree),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperquotient::setting::FType;

    #[test]
    fn witness_powers_are_semi_invariant() {
        // cA-style germ 1/5(2, 2, 3, 3), e = 4: x3^l with 3l = 4 mod 5
        // gives l = 3; x4 likewise.
        let germ = HyperquotientGerm::new(5, [2, 2, 3, 3], 4, FType::CA, vec![], None);
        let powers = witness_pure_powers(&germ, 20);
        assert_eq!(powers.len(), 2);
        for m in &powers {
            assert_eq!(germ.character(m), 4);
            assert!(m.total_degree() >= 2);
        }
    }

    #[test]
    fn cap_can_exclude() {
        let germ = HyperquotientGerm::new(5, [2, 2, 3, 3], 4, FType::CA, vec![], None);
        assert!(witness_pure_powers(&germ, 2).is_empty());
    }

    #[test]
    fn zero_weight_variable() {
        // a_var = 0 and e = 0: every degree works, so the minimal one is
        // the degree floor
        assert_eq!(minimal_power(0, 0, 7, 3, 20), Some(3));
        assert_eq!(minimal_power(0, 3, 7, 3, 20), None);
    }
}
