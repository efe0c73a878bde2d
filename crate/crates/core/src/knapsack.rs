//! Integer knapsack engine: decide `target ∈ ⟨w_1, …, w_k⟩ ⊆ ℕ₀`, produce a
//! representation, or enumerate every representation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Largest modulus for which a residue table is materialized.
pub(crate) const RESIDUE_TABLE_LIMIT: u64 = 1 << 20;

/// Shortest paths over residues modulo the smallest weight: entry `r` is the
/// least combination congruent to `r`, with the last step taken to reach it.
#[derive(Debug, Clone)]
pub(crate) struct ResidueTable {
    weights: Vec<BigUint>,
    modulus_index: usize,
    modulus: u64,
    dist: Distances,
    pred: Vec<(usize, usize)>,
}

/// Distances stay below `modulus · max weight`, so `u128` suffices whenever
/// every weight fits in a `u64`.
#[derive(Debug, Clone)]
enum Distances {
    Small(Vec<Option<u128>>),
    Big(Vec<Option<BigUint>>),
}

impl Distances {
    fn get(&self, r: usize) -> Option<BigUint> {
        match self {
            Distances::Small(d) => d[r].map(BigUint::from),
            Distances::Big(d) => d[r].clone(),
        }
    }
}

/// Dijkstra over `ℤ/m` where adding weight `i` costs `weights[i]`.
fn dijkstra<D>(weights: &[D], residues: &[usize], skip: usize, m: usize) -> (Vec<Option<D>>, Vec<(usize, usize)>)
where
    D: Clone + Ord + Zero,
    for<'a> &'a D: std::ops::Add<&'a D, Output = D>,
{
    let mut dist: Vec<Option<D>> = vec![None; m];
    let mut pred = vec![(usize::MAX, usize::MAX); m];
    let mut done = vec![false; m];
    dist[0] = Some(D::zero());
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((D::zero(), 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if done[r] {
            continue;
        }
        done[r] = true;
        for (i, w) in weights.iter().enumerate() {
            if i == skip || residues[i] == 0 {
                continue;
            }
            let next = (r + residues[i]) % m;
            let cand = &d + w;
            let better = match &dist[next] {
                Some(cur) => cand < *cur,
                None => true,
            };
            if better && !done[next] {
                dist[next] = Some(cand.clone());
                pred[next] = (r, i);
                heap.push(Reverse((cand, next)));
            }
        }
    }
    (dist, pred)
}

impl ResidueTable {
    /// `None` when the smallest weight exceeds [`RESIDUE_TABLE_LIMIT`].
    pub(crate) fn new(weights: &[BigUint]) -> Option<Self> {
        let (modulus_index, min) = weights.iter().enumerate().min_by(|a, b| a.1.cmp(b.1))?;
        let modulus = min.to_u64().filter(|&m| m > 0 && m <= RESIDUE_TABLE_LIMIT)?;
        let m = modulus as usize;
        let residues: Vec<usize> = weights.iter().map(|w| (w % modulus).to_usize().unwrap()).collect();
        let small: Option<Vec<u128>> = weights.iter().map(|w| w.to_u64().map(u128::from)).collect();
        let (dist, pred) = match small {
            Some(ws) => {
                let (d, p) = dijkstra(&ws, &residues, modulus_index, m);
                (Distances::Small(d), p)
            }
            None => {
                let (d, p) = dijkstra(weights, &residues, modulus_index, m);
                (Distances::Big(d), p)
            }
        };
        Some(ResidueTable {
            weights: weights.to_vec(),
            modulus_index,
            modulus,
            dist,
            pred,
        })
    }

    pub(crate) fn contains(&self, target: &BigUint) -> bool {
        let r = (target % self.modulus).to_usize().unwrap();
        matches!(self.dist.get(r), Some(d) if &d <= target)
    }

    /// Multiplicity of each weight in one representation of `target`.
    pub(crate) fn represent(&self, target: &BigUint) -> Option<Vec<BigUint>> {
        let r = (target % self.modulus).to_usize().unwrap();
        let base = self.dist.get(r).filter(|d| d <= target)?;
        let mut counts = vec![BigUint::zero(); self.weights.len()];
        let mut cur = r;
        while cur != 0 {
            let (prev, i) = self.pred[cur];
            counts[i] += 1u32;
            cur = prev;
        }
        counts[self.modulus_index] += (target - base) / self.modulus;
        Some(counts)
    }
}

/// Depth-first search for one representation; weights need not be sorted.
///
/// Exponential in the worst case, used when no residue table is available.
pub(crate) fn search_representation(weights: &[BigUint], target: &BigUint) -> Option<Vec<BigUint>> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
    let sorted: Vec<&BigUint> = order.iter().map(|&i| &weights[i]).collect();
    // suffix_gcd[i] = gcd of sorted[i..]
    let mut suffix_gcd = vec![BigUint::zero(); sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        suffix_gcd[i] = suffix_gcd[i + 1].gcd(sorted[i]);
    }
    let mut counts = vec![BigUint::zero(); sorted.len()];
    if dfs_one(&sorted, &suffix_gcd, 0, target.clone(), &mut counts) {
        let mut out = vec![BigUint::zero(); weights.len()];
        for (pos, &i) in order.iter().enumerate() {
            out[i] = counts[pos].clone();
        }
        Some(out)
    } else {
        None
    }
}

fn dfs_one(weights: &[&BigUint], suffix_gcd: &[BigUint], i: usize, remaining: BigUint, counts: &mut [BigUint]) -> bool {
    if remaining.is_zero() {
        return true;
    }
    if i == weights.len() || !(&remaining % &suffix_gcd[i]).is_zero() {
        return false;
    }
    if i + 1 == weights.len() {
        let (q, r) = remaining.div_rem(weights[i]);
        if r.is_zero() {
            counts[i] = q;
            return true;
        }
        return false;
    }
    let mut c = &remaining / weights[i];
    loop {
        let rest = &remaining - &c * weights[i];
        if dfs_one(weights, suffix_gcd, i + 1, rest, counts) {
            counts[i] = c;
            return true;
        }
        if c.is_zero() {
            return false;
        }
        c -= 1u32;
    }
}

/// One representation of `target`, via the residue table when the smallest
/// weight is small and by search otherwise.
pub(crate) fn represent(table: Option<&ResidueTable>, weights: &[BigUint], target: &BigUint) -> Option<Vec<BigUint>> {
    match table {
        Some(t) => t.represent(target),
        None => search_representation(weights, target),
    }
}

/// Every coefficient vector `c` with `Σ c_i w_i = target`.
///
/// Weights are visited in descending order, each coefficient bounded by
/// `remaining / w_i`; a reachability table over `0..=target` prunes dead
/// branches when `target` is small enough to tabulate.
pub(crate) fn enumerate_all(weights: &[u64], target: u64) -> Vec<Vec<u64>> {
    let k = weights.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
    let sorted: Vec<u64> = order.iter().map(|&i| weights[i]).collect();
    let reach = reachability(&sorted, target);
    let mut out = Vec::new();
    let mut counts = vec![0u64; k];
    enumerate_dfs(&sorted, reach.as_deref(), 0, target, &mut counts, &mut |c| {
        let mut v = vec![0u64; k];
        for (pos, &i) in order.iter().enumerate() {
            v[i] = c[pos];
        }
        out.push(v);
    });
    out.sort();
    out
}

const REACH_LIMIT: u64 = 1 << 22;

/// `reach[i][t]`: whether `t` is a combination of `sorted[i..]`.
fn reachability(sorted: &[u64], target: u64) -> Option<Vec<Vec<bool>>> {
    if target > REACH_LIMIT || sorted.len() * (target as usize + 1) > (1 << 26) {
        return None;
    }
    let t = target as usize;
    let mut tables = vec![vec![false; t + 1]; sorted.len() + 1];
    tables[sorted.len()][0] = true;
    for i in (0..sorted.len()).rev() {
        let w = sorted[i] as usize;
        let mut row = tables[i + 1].clone();
        if w > 0 {
            for v in w..=t {
                if row[v - w] {
                    row[v] = true;
                }
            }
        }
        tables[i] = row;
    }
    Some(tables)
}

fn enumerate_dfs(
    weights: &[u64],
    reach: Option<&[Vec<bool>]>,
    i: usize,
    remaining: u64,
    counts: &mut [u64],
    emit: &mut dyn FnMut(&[u64]),
) {
    if let Some(reach) = reach {
        if !reach[i][remaining as usize] {
            return;
        }
    }
    if i == weights.len() {
        if remaining == 0 {
            emit(counts);
        }
        return;
    }
    let w = weights[i];
    let max = remaining / w;
    for c in (0..=max).rev() {
        counts[i] = c;
        enumerate_dfs(weights, reach, i + 1, remaining - c * w, counts, emit);
    }
    counts[i] = 0;
}
