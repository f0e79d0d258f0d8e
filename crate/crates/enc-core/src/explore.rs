//! Sweep engines behind the CLI: the 1-gap scan over isolated cyclic
//! quotients, the realized-mld sweep with boundaries from a coefficient
//! set and a monomial menu, and the plain gap/stabilization summary.
//!
//! All sweeps are exact, deterministic, and parallel over the index `r`;
//! per-`r` results are merged in order, so the output does not depend on
//! the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::arith::units;
use crate::exact::{Monomial, Rat, Weight};
use crate::toric::mld_numerator_scaled;

/// Outcome of the 1-gap scan: the largest mld strictly below 1 over all
/// isolated three-dimensional cyclic quotients with `r <= r_max`, and every
/// germ attaining it (indices with sorted weight triples).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapScanReport {
    pub r_max: u64,
    pub germs_scanned: u64,
    pub max_below_one: Option<Rat>,
    pub witnesses: Vec<(u64, [u64; 3])>,
}

/// Sweep all isolated `1/r(a1, a2, a3)` with `a1 <= a2 <= a3` (the mld is
/// symmetric in the weights) and record the largest mld strictly below 1.
pub fn gap_scan(r_max: u64) -> GapScanReport {
    let per_r: Vec<(u64, Option<(u64, Vec<[u64; 3]>)>)> = (2..=r_max)
        .into_par_iter()
        .map(|r| {
            let us = units(r);
            let mut count = 0u64;
            // track max of mld < 1 as scaled numerator over r
            let mut best: Option<(u64, Vec<[u64; 3]>)> = None;
            for (i1, &a1) in us.iter().enumerate() {
                for (i2, &a2) in us.iter().enumerate().skip(i1) {
                    for &a3 in us.iter().skip(i2) {
                        count += 1;
                        let m = mld_numerator_scaled(r, &[a1, a2, a3]);
                        if m >= r {
                            continue;
                        }
                        // compare m/r with best as exact fractions
                        let replace = match &best {
                            None => true,
                            Some((bm, _)) => {
                                // m/r vs bm/r: same denominator here
                                m > *bm
                            }
                        };
                        if replace {
                            best = Some((m, vec![[a1, a2, a3]]));
                        } else if let Some((bm, wits)) = &mut best {
                            if m == *bm {
                                wits.push([a1, a2, a3]);
                            }
                        }
                    }
                }
            }
            (count, best.map(|(m, w)| (m, w)))
        })
        .collect();

    let mut germs_scanned = 0;
    let mut max: Option<Rat> = None;
    let mut witnesses: Vec<(u64, [u64; 3])> = Vec::new();
    for (r, (count, best)) in (2..=r_max).zip(per_r) {
        germs_scanned += count;
        if let Some((m, wits)) = best {
            let v = Rat::from_pair(m as i64, r as i64);
            match &max {
                Some(cur) if *cur > v => {}
                Some(cur) if *cur == v => {
                    witnesses.extend(wits.into_iter().map(|w| (r, w)));
                }
                _ => {
                    max = Some(v);
                    witnesses = wits.into_iter().map(|w| (r, w)).collect();
                }
            }
        }
    }
    GapScanReport {
        r_max,
        germs_scanned,
        max_below_one: max,
        witnesses,
    }
}

/// The default support menu for boundary sweeps: all monomials in three
/// variables of total degree between 1 and `max_degree`.
pub fn default_support_menu(max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for e1 in 0..=d {
            for e2 in 0..=(d - e1) {
                let e3 = d - e1 - e2;
                out.push(Monomial::new(vec![e1, e2, e3]));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmldReport {
    pub r_max: u64,
    pub eps: Rat,
    pub gamma: Vec<Rat>,
    pub menu_degree: u32,
    pub enc_germs: u64,
    /// Realized pair mlds at least `eps`, ascending, deduplicated.
    pub values: Vec<Rat>,
    pub min_gap: Option<Rat>,
}

/// Realized mlds of enc cyclic quotient pairs: germs `r <= r_max` (one
/// representative per relabeling class; the witness vector, hence every
/// realized value, is invariant), boundaries one `(gamma, monomial)`
/// component from the menu. Values below `eps` and non-klt pairs are
/// dropped from the value set.
pub fn emld_sweep(r_max: u64, gamma: &[Rat], eps: &Rat, menu_degree: u32) -> EmldReport {
    let menu = default_support_menu(menu_degree);
    let per_r: Vec<(u64, BTreeSet<Rat>)> = (2..=r_max)
        .into_par_iter()
        .map(|r| emld_single_r(r, gamma, eps, &menu))
        .collect();

    let mut values: BTreeSet<Rat> = BTreeSet::new();
    let mut enc_germs = 0;
    for (count, vals) in per_r {
        enc_germs += count;
        values.extend(vals);
    }
    let values: Vec<Rat> = values.into_iter().collect();
    let min_gap = min_consecutive_gap(&values);
    EmldReport {
        r_max,
        eps: eps.clone(),
        gamma: gamma.to_vec(),
        menu_degree,
        enc_germs,
        values,
        min_gap,
    }
}

fn emld_single_r(r: u64, gamma: &[Rat], eps: &Rat, menu: &[Monomial]) -> (u64, BTreeSet<Rat>) {
    let mut values = BTreeSet::new();
    let mut enc_count = 0u64;
    let us = units(r);
    // one representative per relabeling class: a1 = 1 (relabel by a1^{-1}),
    // b <= c by the coordinate symmetry of the menu
    for (i2, &b) in us.iter().enumerate() {
        for &c in us.iter().skip(i2) {
            // enc test in scaled integers: exactly one k with
            // sum_i {k a_i / r} <= 1 and that one < 1
            let mut low: Option<u64> = None;
            let mut low_count = 0;
            let (mut s1, mut s2, mut s3) = (0u64, 0u64, 0u64);
            for k in 1..r {
                s1 += 1;
                if s1 >= r {
                    s1 -= r;
                }
                s2 += b;
                if s2 >= r {
                    s2 -= r;
                }
                s3 += c;
                if s3 >= r {
                    s3 -= r;
                }
                let sum = s1 + s2 + s3;
                if sum <= r {
                    low_count += 1;
                    if low_count >= 2 {
                        break;
                    }
                    if sum < r {
                        low = Some(k);
                    }
                }
            }
            if low_count != 1 {
                continue;
            }
            let Some(k0) = low else { continue };
            enc_count += 1;
            let alpha = Weight::new(vec![
                Rat::from_pair((k0 % r) as i64, r as i64),
                Rat::from_pair((k0 * b % r) as i64, r as i64),
                Rat::from_pair((k0 * c % r) as i64, r as i64),
            ])
            .expect("non-negative");
            let mld = alpha.coord_sum();
            if &mld >= eps {
                values.insert(mld.clone());
            }
            for g in gamma {
                if g.is_zero() {
                    continue;
                }
                for mon in menu {
                    let w = alpha.of_monomial(mon).expect("dimensions match");
                    let v = &mld - &(g * &w);
                    // klt pairs only, value at least eps
                    if !v.is_negative() && !v.is_zero() && &v >= eps {
                        values.insert(v);
                    }
                }
            }
        }
    }
    (enc_count, values)
}

fn min_consecutive_gap(values: &[Rat]) -> Option<Rat> {
    values
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
}

/// Summary of a sorted value list: count above the floor, minimal
/// consecutive gap there, and whether a second list (for example the same
/// sweep at a smaller bound) realizes the identical set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AccSummary {
    pub count: u64,
    pub min_gap: Option<Rat>,
    pub stabilized: Option<bool>,
}

pub fn acc_report(values: &[Rat], eps: &Rat, baseline: Option<&[Rat]>) -> AccSummary {
    let above: Vec<Rat> = values.iter().filter(|v| *v >= eps).cloned().collect();
    let stabilized = baseline.map(|base| {
        let base_above: Vec<Rat> = base.iter().filter(|v| *v >= eps).cloned().collect();
        base_above == above
    });
    AccSummary {
        count: above.len() as u64,
        min_gap: min_consecutive_gap(&above),
        stabilized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_scan_r13_hits_12_13() {
        let rep = gap_scan(13);
        assert_eq!(rep.max_below_one, Some(Rat::from_pair(12, 13)));
        assert!(rep.witnesses.contains(&(13, [3, 4, 5])));
        // all witnesses are relabelings at r = 13
        assert!(rep.witnesses.iter().all(|(r, _)| *r == 13));
    }

    #[test]
    fn gap_scan_r12_below() {
        let rep = gap_scan(12);
        let max = rep.max_below_one.clone().unwrap();
        assert!(max < Rat::from_pair(12, 13));
        // exact value is part of the frozen expectations in the acceptance
        // suite; here only monotonicity is asserted
        let rep13 = gap_scan(13);
        assert!(rep13.max_below_one.unwrap() >= max);
    }

    #[test]
    fn emld_gamma_zero_matches_enc_mlds() {
        let rep = emld_sweep(13, &[Rat::zero()], &Rat::from_pair(1, 2), 3);
        assert!(rep.values.contains(&Rat::from_pair(12, 13)));
        // with gamma = {0} every value is an enc mld, so all values are < 1
        assert!(rep.values.iter().all(|v| *v < Rat::one()));
    }

    #[test]
    fn emld_with_coefficients_adds_values() {
        let plain = emld_sweep(13, &[Rat::zero()], &Rat::from_pair(1, 100), 3);
        let rich = emld_sweep(13, &[Rat::from_pair(1, 2)], &Rat::from_pair(1, 100), 3);
        for v in &plain.values {
            assert!(rich.values.contains(v));
        }
        assert!(rich.values.len() >= plain.values.len());
    }

    #[test]
    fn acc_report_examples() {
        let empty = acc_report(&[], &Rat::zero(), None);
        assert_eq!(empty.count, 0);
        assert!(empty.min_gap.is_none());

        let vals = vec![
            Rat::from_pair(1, 3),
            Rat::from_pair(1, 2),
            Rat::from_pair(12, 13),
        ];
        let rep = acc_report(&vals, &Rat::zero(), None);
        assert_eq!(rep.count, 3);
        assert_eq!(rep.min_gap, Some(Rat::from_pair(1, 6)));

        let rep2 = acc_report(&vals, &Rat::zero(), Some(&vals.clone()));
        assert_eq!(rep2.stabilized, Some(true));
    }

    #[test]
    fn menu_sizes() {
        assert_eq!(default_support_menu(1).len(), 3);
        assert_eq!(default_support_menu(3).len(), 19);
    }
}
