//! Characters of finite dimensional irreducible modules of types B and C by
//! Freudenthal's multiplicity formula.
//!
//! Weights are written in doubled coordinates: the vector `d` stands for
//! `Σ (d_i / 2) ε_i`, so half-integral spin weights stay integral.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalType {
    B,
    C,
}

/// Doubled weights and their multiplicities.
pub type ClassicalCharacter = BTreeMap<Vec<i64>, u64>;

fn positive_roots(ty: ClassicalType, m: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for s in [-2, 2] {
                let mut r = vec![0; m];
                r[i] = 2;
                r[j] = s;
                roots.push(r);
            }
        }
        let mut r = vec![0; m];
        r[i] = if ty == ClassicalType::C { 4 } else { 2 };
        roots.push(r);
    }
    roots
}

fn rho(ty: ClassicalType, m: usize) -> Vec<i64> {
    (0..m)
        .map(|i| {
            let k = (m - i) as i64;
            if ty == ClassicalType::C { 2 * k } else { 2 * k - 1 }
        })
        .collect()
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn dominant_rep(x: &[i64]) -> Vec<i64> {
    let mut v: Vec<i64> = x.iter().map(|a| a.abs()).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Whether `diff` (doubled) is a nonnegative integral sum of simple roots.
fn in_positive_cone(ty: ClassicalType, diff: &[i64]) -> bool {
    let mut s = 0;
    for (j, &d) in diff.iter().enumerate() {
        s += d;
        if s < 0 || s % 2 != 0 {
            return false;
        }
        if j + 1 == diff.len() && ty == ClassicalType::C && (s / 2) % 2 != 0 {
            return false;
        }
    }
    true
}

fn check_highest(ty: ClassicalType, hw: &[i64]) -> Result<()> {
    let dominant = hw.windows(2).all(|w| w[0] >= w[1]) && hw.last().is_none_or(|&x| x >= 0);
    let parity = match ty {
        ClassicalType::C => hw.iter().all(|x| x % 2 == 0),
        ClassicalType::B => hw.iter().all(|x| x % 2 == 0) || hw.iter().all(|x| x % 2 != 0),
    };
    if !dominant || !parity {
        return Err(Error::InvalidInput(format!("{hw:?} is not a dominant integral weight of type {ty:?}")));
    }
    Ok(())
}

fn dominant_below(ty: ClassicalType, hw: &[i64]) -> Vec<Vec<i64>> {
    let m = hw.len();
    let top = hw.first().copied().unwrap_or(0);
    let mut out = Vec::new();
    fn go(ty: ClassicalType, hw: &[i64], m: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            let diff: Vec<i64> = hw.iter().zip(cur.iter()).map(|(a, b)| a - b).collect();
            if in_positive_cone(ty, &diff) {
                out.push(cur.clone());
            }
            return;
        }
        let start = hw.last().copied().unwrap_or(0).rem_euclid(2);
        let mut v = start;
        while v <= max {
            cur.push(v);
            go(ty, hw, m, v, cur, out);
            cur.pop();
            v += 2;
        }
    }
    go(ty, hw, m, top, &mut Vec::new(), &mut out);
    out
}

/// Multiplicities of the dominant weights of the irreducible module.
pub fn dominant_multiplicities(ty: ClassicalType, hw: &[i64]) -> Result<BTreeMap<Vec<i64>, u64>> {
    check_highest(ty, hw)?;
    let m = hw.len();
    let roots = positive_roots(ty, m);
    let r = rho(ty, m);
    let shifted = |x: &[i64]| -> i64 {
        let v: Vec<i64> = x.iter().zip(&r).map(|(a, b)| a + b).collect();
        dot(&v, &v)
    };
    let top_norm = shifted(hw);
    let mut weights = dominant_below(ty, hw);
    // process from the top: larger height first
    weights.sort_by_key(|w| {
        let diff: i64 = hw.iter().zip(w).enumerate().map(|(i, (a, b))| (m - i) as i64 * (a - b)).sum();
        diff
    });
    let mut mult: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for w in weights {
        if w == hw {
            mult.insert(w, 1);
            continue;
        }
        let mut total: i64 = 0;
        for a in &roots {
            let mut k = 1;
            loop {
                let v: Vec<i64> = w.iter().zip(a).map(|(x, y)| x + k * y).collect();
                let rep = dominant_rep(&v);
                if rep[0] > hw[0] {
                    break;
                }
                if let Some(&c) = mult.get(&rep) {
                    total += 2 * dot(&v, a) * c as i64;
                }
                k += 1;
            }
        }
        let denom = top_norm - shifted(&w);
        if denom <= 0 || total % denom != 0 {
            return Err(Error::Verification(format!("Freudenthal recursion failed at {w:?}")));
        }
        let c = total / denom;
        if c > 0 {
            mult.insert(w, c as u64);
        }
    }
    Ok(mult)
}

fn signed_permutations(w: &[i64]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut base = w.to_vec();
    base.sort_unstable();
    // iterate over distinct permutations via next_permutation
    loop {
        let nonzero: Vec<usize> = (0..base.len()).filter(|&i| base[i] != 0).collect();
        for mask in 0u32..(1 << nonzero.len()) {
            let mut v = base.clone();
            for (b, &i) in nonzero.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v[i] = -v[i];
                }
            }
            out.insert(v);
        }
        if !next_permutation(&mut base) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Full character of the irreducible module with doubled highest weight `hw`.
pub fn character(ty: ClassicalType, hw: &[i64]) -> Result<ClassicalCharacter> {
    let dom = dominant_multiplicities(ty, hw)?;
    let mut out = BTreeMap::new();
    for (w, c) in dom {
        for v in signed_permutations(&w) {
            out.insert(v, c);
        }
    }
    Ok(out)
}

pub fn dimension(ty: ClassicalType, hw: &[i64]) -> Result<u64> {
    Ok(character(ty, hw)?.values().sum())
}

/// Weyl's product formula, used as a cross-check on the recursion.
pub fn dimension_product(ty: ClassicalType, hw: &[i64]) -> Result<u64> {
    check_highest(ty, hw)?;
    let m = hw.len();
    let r = rho(ty, m);
    let shifted: Vec<i64> = hw.iter().zip(&r).map(|(a, b)| a + b).collect();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for a in positive_roots(ty, m) {
        num *= dot(&shifted, &a) as i128;
        den *= dot(&r, &a) as i128;
    }
    Ok((num / den) as u64)
}

/// Doubled highest weight from a partition (integral weights only).
pub fn from_partition(parts: &[usize], rank: usize) -> Result<Vec<i64>> {
    if parts.len() > rank {
        return Err(Error::InvalidInput(format!("{parts:?} has more than {rank} parts")));
    }
    Ok((0..rank).map(|i| 2 * parts.get(i).copied().unwrap_or(0) as i64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassicalType::*;

    #[test]
    fn small_dimensions() {
        assert_eq!(dimension(C, &from_partition(&[1], 2).unwrap()).unwrap(), 4);
        assert_eq!(dimension(C, &from_partition(&[], 2).unwrap()).unwrap(), 1);
        assert_eq!(dimension(B, &from_partition(&[1], 2).unwrap()).unwrap(), 5);
        assert_eq!(dimension(B, &[1, 1]).unwrap(), 4);
        assert_eq!(dimension(B, &[1, 1, 1]).unwrap(), 8);
        assert_eq!(dimension(C, &from_partition(&[1, 1], 2).unwrap()).unwrap(), 5);
        assert_eq!(dimension(B, &from_partition(&[1, 1], 2).unwrap()).unwrap(), 10);
    }

    #[test]
    fn recursion_matches_product_formula() {
        for ty in [B, C] {
            for m in 1..=3 {
                for a in 0..=3usize {
                    for b in 0..=a {
                        let parts: Vec<usize> = [a, b].into_iter().take(m).collect();
                        let mut hw = from_partition(&parts, m).unwrap();
                        assert_eq!(dimension(ty, &hw).unwrap(), dimension_product(ty, &hw).unwrap());
                        if ty == B {
                            hw.iter_mut().for_each(|x| *x += 1);
                            assert_eq!(dimension(ty, &hw).unwrap(), dimension_product(ty, &hw).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_dominant() {
        assert!(dimension(C, &[0, 2]).is_err());
        assert!(dimension(C, &[1, 1]).is_err());
    }
}
