//! Factorizations, sets of lengths and elasticity in finitely generated
//! Puiseux monoids.
//!
//! Every query clears denominators by the monoid's common denominator `L` and
//! works with the integer knapsack `Σ c_i (L a_i) = L x`. Families of
//! infinitely generated monoids are only reachable through an explicit
//! [`truncate`](crate::puiseux::PuiseuxSpec::truncate) followed by
//! [`FiniteMonoid::new`].

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{domain, Error, Result};
use crate::knapsack;
use crate::puiseux::FiniteMonoid;

/// A formal sum of atoms with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization {
    parts: BTreeMap<Rational, u64>,
}

impl Factorization {
    /// The empty factorization, the only factorization of zero.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Collects `(atom, count)` pairs, merging repeats and dropping zero counts.
    pub fn from_counts(pairs: impl IntoIterator<Item = (Rational, u64)>) -> Self {
        let mut f = Self::empty();
        for (atom, count) in pairs {
            f.add(atom, count);
        }
        f
    }

    pub fn add(&mut self, atom: Rational, count: u64) {
        if count > 0 {
            *self.parts.entry(atom).or_insert(0) += count;
        }
    }

    /// Atoms ascending with their multiplicities.
    pub fn parts(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.parts.iter().map(|(a, &c)| (a, c))
    }

    pub fn count(&self, atom: &Rational) -> u64 {
        self.parts.get(atom).copied().unwrap_or(0)
    }

    pub fn len(&self) -> u64 {
        self.parts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The element this factorization represents.
    pub fn evaluate(&self) -> Rational {
        self.parts.iter().map(|(a, &c)| a.scale(&c.into())).sum()
    }

    /// Multiplies every atom by `q`, keeping multiplicities.
    pub fn scaled(&self, q: &Rational) -> Factorization {
        Factorization {
            parts: self.parts.iter().map(|(a, &c)| (a * q, c)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Part {
    atom: Rational,
    count: u64,
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<Part> = self
            .parts
            .iter()
            .map(|(a, &c)| Part {
                atom: a.clone(),
                count: c,
            })
            .collect();
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Factorization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<Part>::deserialize(deserializer)?;
        Ok(Factorization::from_counts(parts.into_iter().map(|p| (p.atom, p.count))))
    }
}

/// A set of factorization lengths, ascending.
pub type LengthSet = BTreeSet<u64>;

fn cleared_problem(monoid: &FiniteMonoid, x: &Rational) -> Result<Option<(Vec<u64>, u64)>> {
    let Some(target) = x.cleared(monoid.common_denominator()) else {
        return Ok(None);
    };
    let too_large = || Error::TooLarge(format!("{x} exceeds the enumeration range after clearing denominators"));
    let target = target.to_u64().ok_or_else(too_large)?;
    let weights = monoid
        .cleared_atoms()
        .iter()
        .map(|w| w.to_u64().ok_or_else(too_large))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((weights, target)))
}

/// The complete set `Z(x)`, sorted; empty when `x` is not in the monoid.
pub fn factorizations(monoid: &FiniteMonoid, x: &Rational) -> Result<Vec<Factorization>> {
    let Some((weights, target)) = cleared_problem(monoid, x)? else {
        return Ok(Vec::new());
    };
    let atoms = monoid.atoms();
    let mut out: Vec<Factorization> = knapsack::enumerate_all(&weights, target)
        .into_iter()
        .map(|counts| Factorization::from_counts(atoms.iter().cloned().zip(counts)))
        .collect();
    out.sort();
    Ok(out)
}

/// `L(x) = {|z| : z ∈ Z(x)}`.
pub fn length_set(monoid: &FiniteMonoid, x: &Rational) -> Result<LengthSet> {
    Ok(factorizations(monoid, x)?.iter().map(Factorization::len).collect())
}

/// `max L(x) / min L(x)` for a nonzero element `x`.
pub fn elasticity(monoid: &FiniteMonoid, x: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return domain("elasticity is defined for nonzero elements only");
    }
    let lengths = length_set(monoid, x)?;
    match (lengths.first(), lengths.last()) {
        (Some(&lo), Some(&hi)) => Rational::new(hi, lo),
        _ => domain(format!("{x} is not an element of the monoid")),
    }
}

/// Outcome of a bounded half-factoriality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfFactorialReport {
    pub half_factorial: bool,
    pub bound: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Rational>,
}

/// Checks `|L(x)| = 1` for every element `x ≤ bound`, reporting the least
/// counterexample.
///
/// Minimum and maximum lengths are tabulated over the cleared lattice
/// `0..=L·bound`; an element has a single length exactly when they agree.
pub fn half_factorial_up_to(monoid: &FiniteMonoid, bound: &Rational) -> Result<HalfFactorialReport> {
    if bound.is_zero() {
        return domain("bound must be positive");
    }
    let l = monoid.common_denominator();
    let top = bound.scale(l);
    // floor(L * bound)
    let top = (top.numerator() / top.denominator())
        .to_usize()
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::TooLarge(format!("bound {bound} is too large to tabulate")))?;
    let weights: Vec<usize> = monoid
        .cleared_atoms()
        .iter()
        .map(|w| w.to_usize().unwrap_or(usize::MAX))
        .collect();
    let mut min_len = vec![u64::MAX; top + 1];
    let mut max_len = vec![0u64; top + 1];
    min_len[0] = 0;
    for t in 1..=top {
        for &w in &weights {
            if w <= t && min_len[t - w] != u64::MAX {
                min_len[t] = min_len[t].min(min_len[t - w] + 1);
                max_len[t] = max_len[t].max(max_len[t - w] + 1);
            }
        }
        if min_len[t] != u64::MAX && min_len[t] != max_len[t] {
            return Ok(HalfFactorialReport {
                half_factorial: false,
                bound: bound.clone(),
                counterexample: Some(Rational::new(t as u64, l.clone())?),
            });
        }
    }
    Ok(HalfFactorialReport {
        half_factorial: true,
        bound: bound.clone(),
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn monoid(gens: &[&str]) -> FiniteMonoid {
        FiniteMonoid::new(&gens.iter().map(|g| q(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn factorizations_examples() {
        let m = monoid(&["2", "3"]);
        let z = factorizations(&m, &q("6")).unwrap();
        assert_eq!(
            z,
            vec![
                Factorization::from_counts([(q("2"), 3)]),
                Factorization::from_counts([(q("3"), 2)]),
            ]
        );
        assert_eq!(
            factorizations(&m, &Rational::zero()).unwrap(),
            vec![Factorization::empty()]
        );
        let m = monoid(&["3/2", "5/2"]);
        assert_eq!(
            factorizations(&m, &q("4")).unwrap(),
            vec![Factorization::from_counts([(q("3/2"), 1), (q("5/2"), 1)])]
        );
        assert!(factorizations(&m, &q("1/3")).unwrap().is_empty());
    }

    #[test]
    fn length_and_elasticity_examples() {
        let m23 = monoid(&["2", "3"]);
        let m35 = monoid(&["3", "5"]);
        assert_eq!(length_set(&m23, &q("6")).unwrap(), LengthSet::from([2, 3]));
        assert_eq!(length_set(&m23, &Rational::zero()).unwrap(), LengthSet::from([0]));
        assert_eq!(length_set(&m35, &q("15")).unwrap(), LengthSet::from([3, 5]));
        assert_eq!(elasticity(&m23, &q("6")).unwrap(), q("3/2"));
        assert_eq!(elasticity(&m23, &q("2")).unwrap(), q("1"));
        assert_eq!(elasticity(&m35, &q("15")).unwrap(), q("5/3"));
        assert!(elasticity(&m35, &q("7")).is_err());
        assert!(elasticity(&m35, &Rational::zero()).is_err());
    }

    #[test]
    fn half_factorial_examples() {
        let r = half_factorial_up_to(&monoid(&["2", "3"]), &q("10")).unwrap();
        assert!(!r.half_factorial);
        assert_eq!(r.counterexample, Some(q("6")));
        assert!(half_factorial_up_to(&monoid(&["1"]), &q("10")).unwrap().half_factorial);
        assert!(half_factorial_up_to(&monoid(&["2"]), &q("10")).unwrap().half_factorial);
        let r = half_factorial_up_to(&monoid(&["1/2", "1/3"]), &q("2")).unwrap();
        assert_eq!(r.counterexample, Some(q("1")));
    }

    #[test]
    fn factorization_json() {
        let f = Factorization::from_counts([(q("5/2"), 1), (q("3/2"), 2)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"[{"atom":"3/2","count":2},{"atom":"5/2","count":1}]"#);
        assert_eq!(serde_json::from_str::<Factorization>(&s).unwrap(), f);
        assert_eq!(f.len(), 3);
        assert_eq!(f.evaluate(), q("11/2"));
    }
}
