//! Brute-force oracles shared by the integration tests. They work on plain
//! integers and never call into the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// `reach[k]` is true when `k ∈ ⟨gens⟩`, for `k ≤ bound`.
pub fn reachable(gens: &[u64], bound: u64) -> Vec<bool> {
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for k in 1..=bound as usize {
        reach[k] = gens.iter().any(|&g| g as usize <= k && g > 0 && reach[k - g as usize]);
    }
    reach
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Largest integer outside `⟨gens⟩` (`gcd = 1`), or -1 when there is none.
pub fn frobenius(gens: &[u64]) -> i64 {
    let m = *gens.iter().max().unwrap();
    let bound = m * m + m;
    let reach = reachable(gens, bound);
    reach.iter().rposition(|&r| !r).map_or(-1, |i| i as i64)
}

/// Generators `g` that are not `a + b` with `a, b` nonzero elements.
pub fn minimal_generators(gens: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = gens.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let max = *sorted.last().unwrap();
    let reach = reachable(&sorted, max);
    sorted
        .into_iter()
        .filter(|&g| !(1..g).any(|a| reach[a as usize] && reach[(g - a) as usize]))
        .collect()
}

/// Every coefficient vector `c` with `Σ c_i·atoms_i = target`.
pub fn coefficient_vectors(atoms: &[u64], target: u64) -> Vec<Vec<u64>> {
    fn go(atoms: &[u64], i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == atoms.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left / atoms[i] {
            cur.push(c);
            go(atoms, i + 1, left - c * atoms[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(atoms, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Lengths of all factorizations of `target` over `atoms`.
pub fn lengths(atoms: &[u64], target: u64) -> Vec<u64> {
    let mut ls: Vec<u64> = coefficient_vectors(atoms, target)
        .iter()
        .map(|c| c.iter().sum())
        .collect();
    ls.sort_unstable();
    ls.dedup();
    ls
}

/// `p`-power-free test for a rational `a/b` against `r = n/d`: brute search
/// over exponents in `-limit..=limit`.
pub fn power_of(n: u64, d: u64, a: u64, b: u64, limit: u32) -> Option<i64> {
    let (a, b) = (a / gcd(a, b), b / gcd(a, b));
    for k in 0..=limit {
        let (num, den) = (n.checked_pow(k), d.checked_pow(k));
        if let (Some(num), Some(den)) = (num, den) {
            if (num, den) == (a, b) {
                return Some(k as i64);
            }
            if (den, num) == (a, b) {
                return Some(-(k as i64));
            }
        }
    }
    None
}

/// Multisets over `Z_n`, as count vectors, of total length at most `max_len`.
pub fn count_vectors(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur.push(c);
            go(n, i + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn zero_sum(counts: &[usize], n: usize) -> bool {
    counts.iter().enumerate().map(|(g, &c)| g * c).sum::<usize>() % n == 0
}

/// A nonempty zero-sum sequence with no proper nonempty zero-sum subsequence.
pub fn is_minimal_zero_sum(counts: &[usize], n: usize) -> bool {
    let total: usize = counts.iter().sum();
    if total == 0 || !zero_sum(counts, n) {
        return false;
    }
    let mut sub = vec![0usize; n];
    loop {
        let mut i = 0;
        while i < n {
            if sub[i] < counts[i] {
                sub[i] += 1;
                break;
            }
            sub[i] = 0;
            i += 1;
        }
        if i == n {
            return true;
        }
        let len: usize = sub.iter().sum();
        if len < total && zero_sum(&sub, n) {
            return false;
        }
    }
}

/// Minimal zero-sum sequences over `Z_n` as `element → count` maps.
pub fn cyclic_block_atoms(n: usize) -> Vec<BTreeMap<usize, usize>> {
    count_vectors(n, n)
        .into_iter()
        .filter(|c| is_minimal_zero_sum(c, n))
        .map(|c| c.into_iter().enumerate().filter(|&(_, k)| k > 0).collect())
        .collect()
}

/// Whether `a_{k+1} ∈ ⟨a_1, …, a_k⟩`, by sieve.
pub fn next_term_in_prefix(seq: &[u64], k: usize) -> bool {
    reachable(&seq[..k], seq[k])[seq[k] as usize]
}
