//! Independent brute-force oracles shared by the integration tests. Nothing
//! here calls into the solver or the crate's own solution enumerator.

#![allow(dead_code)]

/// Solutions of `ax + by = cz` inside `[1,n]`, as bitmasks over `0..n`,
/// from a plain triple loop.
pub fn solution_masks(a: u64, b: u64, c: u64, n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            for z in 1..=n {
                if a * x + b * y == c * z {
                    out.push(1 << (x - 1) | 1 << (y - 1) | 1 << (z - 1));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Maximum size of a subset of `[1,n]` containing no solution, by scanning
/// all `2^n` subsets.
pub fn brute_max(a: u64, b: u64, c: u64, n: u64) -> usize {
    assert!(n <= 24);
    let sols = solution_masks(a, b, c, n);
    let mut best = 0;
    for mask in 0u64..1 << n {
        let size = mask.count_ones() as usize;
        if size > best && sols.iter().all(|&s| mask & s != s) {
            best = size;
        }
    }
    best
}

/// `true` iff no solution of `ax + by = cz` has all three values in `set`.
pub fn brute_avoids(a: u64, b: u64, c: u64, set: &[u64]) -> bool {
    for &x in set {
        for &y in set {
            for &z in set {
                if a * x + b * y == c * z {
                    return false;
                }
            }
        }
    }
    true
}
