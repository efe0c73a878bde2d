//! Numerical monoids: cofinite submonoids of `ℕ₀`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A numerical monoid, stored by its minimal generating set.
///
/// The Apéry set with respect to the smallest generator is computed on first
/// use and shared by every membership query afterwards.
#[derive(Clone)]
pub struct NumericalMonoid {
    gens: Vec<u64>,
    apery: OnceLock<Vec<u64>>,
}

impl NumericalMonoid {
    /// Divides out the gcd and minimalizes; returns the monoid and the gcd.
    pub fn from_generators(gens: &[u64]) -> Result<(Self, u64)> {
        if gens.is_empty() {
            return domain("a numerical monoid needs at least one generator");
        }
        if gens.contains(&0) {
            return domain("generators must be positive");
        }
        let scale = gens.iter().fold(0u64, |g, &x| g.gcd(&x));
        let mut scaled: Vec<u64> = gens.iter().map(|&g| g / scale).collect();
        scaled.sort_unstable();
        scaled.dedup();
        Ok((NumericalMonoid::from_sorted(minimalize(&scaled)), scale))
    }

    /// Like [`from_generators`](Self::from_generators), but rejects a gcd other than one.
    pub fn new(gens: &[u64]) -> Result<Self> {
        let (monoid, scale) = Self::from_generators(gens)?;
        if scale != 1 {
            return domain(format!(
                "generators {gens:?} have gcd {scale}; a numerical monoid needs gcd 1"
            ));
        }
        Ok(monoid)
    }

    /// The monoid `ℕ₀ = ⟨1⟩`.
    pub fn naturals() -> Self {
        NumericalMonoid::from_sorted(vec![1])
    }

    fn from_sorted(gens: Vec<u64>) -> Self {
        NumericalMonoid {
            gens,
            apery: OnceLock::new(),
        }
    }

    /// Minimal generators (the atoms), ascending.
    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn multiplicity(&self) -> u64 {
        self.gens[0]
    }

    fn apery_min(&self) -> &[u64] {
        self.apery.get_or_init(|| round_robin(&self.gens, self.gens[0]))
    }

    pub fn contains(&self, x: u64) -> bool {
        let m = self.gens[0];
        x >= self.apery_min()[(x % m) as usize]
    }

    pub fn contains_big(&self, x: &BigUint) -> bool {
        match x.to_u64() {
            Some(small) => self.contains(small),
            None => {
                let m = self.gens[0];
                let r = (x % m).to_usize().unwrap();
                *x >= BigUint::from(self.apery_min()[r])
            }
        }
    }

    /// The largest integer outside the monoid; `-1` for `ℕ₀`.
    pub fn frobenius(&self) -> i64 {
        let max = *self.apery_min().iter().max().unwrap();
        max as i64 - self.gens[0] as i64
    }

    /// For each residue `r` mod `m`, the least element congruent to `r`.
    pub fn apery_set(&self, m: u64) -> Result<Vec<u64>> {
        if m == 0 || !self.contains(m) {
            return domain(format!("{m} is not a nonzero element of {self}"));
        }
        if m == self.gens[0] {
            return Ok(self.apery_min().to_vec());
        }
        Ok(round_robin(&self.gens, m))
    }

    /// Every element of `other` lies in `self`.
    pub fn includes(&self, other: &NumericalMonoid) -> bool {
        other.gens.iter().all(|&g| self.contains(g))
    }
}

/// Drops every generator expressible by the smaller ones; input sorted, deduplicated.
fn minimalize(sorted: &[u64]) -> Vec<u64> {
    let mut kept: Vec<u64> = Vec::new();
    for &g in sorted {
        let redundant = !kept.is_empty() && {
            let d = kept.iter().fold(0u64, |a, &b| a.gcd(&b));
            g % d == 0 && {
                let reduced: Vec<u64> = kept.iter().map(|&k| k / d).collect();
                let table = round_robin(&reduced, reduced[0]);
                let t = g / d;
                t >= table[(t % reduced[0]) as usize]
            }
        };
        if !redundant {
            kept.push(g);
        }
    }
    kept
}

/// Apéry set of `⟨gens⟩` with respect to `m` by the round-robin algorithm;
/// unreachable residues are `u64::MAX`.
fn round_robin(gens: &[u64], m: u64) -> Vec<u64> {
    let size = m as usize;
    let mut n = vec![u64::MAX; size];
    n[0] = 0;
    for &a in gens {
        let step = (a % m) as usize;
        if step == 0 {
            continue;
        }
        let d = (a.gcd(&m)) as usize;
        for p in 0..d {
            // least entry in the residue class p mod d
            let mut best = (u64::MAX, p);
            let mut r = p;
            while r < size {
                if n[r] < best.0 {
                    best = (n[r], r);
                }
                r += d;
            }
            if best.0 == u64::MAX {
                continue;
            }
            let (mut cur, mut r) = best;
            for _ in 0..size / d {
                r = (r + step) % size;
                cur = cur.saturating_add(a).min(n[r]);
                n[r] = cur;
            }
        }
    }
    n
}

impl PartialEq for NumericalMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for NumericalMonoid {}

impl fmt::Display for NumericalMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(u64::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Debug for NumericalMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericalMonoid{self}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename = "numerical")]
struct NumericalRepr {
    generators: Vec<u64>,
}

impl Serialize for NumericalMonoid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NumericalRepr {
            generators: self.gens.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NumericalMonoid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = NumericalRepr::deserialize(deserializer)?;
        NumericalMonoid::new(&repr.generators).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for NumericalMonoid {
    type Err = Error;

    /// Comma-separated generators, e.g. `3,5`.
    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad generator '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        NumericalMonoid::new(&gens)
    }
}
