//! Small modular-arithmetic helpers for the integer fast paths.
//!
//! Sweeps keep every quantity scaled by the group order `r`, so the inner
//! loops work on `u64` residues and never touch a rational. Bounds: all
//! callers keep `r` well below 2^20, so products fit in `u64` with room to
//! spare.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least non-negative residue of a (possibly negative) integer.
pub fn reduce_mod(x: i64, r: u64) -> u64 {
    let r_i = r as i64;
    (((x % r_i) + r_i) % r_i) as u64
}

/// Inverse of `a` mod `r`; `None` when `gcd(a, r) != 1`.
pub fn mod_inverse(a: u64, r: u64) -> Option<u64> {
    if r == 1 {
        return Some(0);
    }
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut rem, mut new_rem): (i128, i128) = (r as i128, (a % r) as i128);
    while new_rem != 0 {
        let q = rem / new_rem;
        (t, new_t) = (new_t, t - q * new_t);
        (rem, new_rem) = (new_rem, rem - q * new_rem);
    }
    if rem != 1 {
        return None;
    }
    Some(reduce_mod(t as i64, r))
}

/// Units of `Z/r`, ascending. For `r = 1` this is `[0]` (the trivial group).
pub fn units(r: u64) -> Vec<u64> {
    if r == 1 {
        return vec![0];
    }
    (1..r).filter(|&j| gcd(j, r) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_inverse() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(mod_inverse(3, 13), Some(9)); // 27 = 2*13 + 1
        assert_eq!(mod_inverse(4, 12), None);
        for r in 2u64..40 {
            for a in units(r) {
                let inv = mod_inverse(a, r).unwrap();
                assert_eq!(a * inv % r, 1 % r);
            }
        }
    }

    #[test]
    fn reduce_mod_negative() {
        assert_eq!(reduce_mod(-1, 13), 12);
        assert_eq!(reduce_mod(-26, 13), 0);
        assert_eq!(reduce_mod(5, 13), 5);
    }
}
