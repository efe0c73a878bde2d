use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{common_denominator, Rational};
use crate::error::{domain, Error, Result};
use crate::factor::Factorization;
use crate::knapsack::{self, ResidueTable};

/// A finitely generated Puiseux monoid, held by its minimal generating set.
///
/// The generating set is the atom set `A(M)`. Membership is decided
/// exactly by clearing denominators with `L = lcm d(A(M))`.
#[derive(Clone)]
pub struct FiniteMonoid {
    atoms: Vec<Rational>,
    common_denominator: BigUint,
    cleared: Vec<BigUint>,
    table: OnceLock<Option<ResidueTable>>,
}

impl FiniteMonoid {
    /// Builds the monoid generated by `gens`, discarding redundant generators.
    pub fn new(gens: &[Rational]) -> Result<Self> {
        if gens.is_empty() {
            return domain("a finitely generated monoid needs at least one generator");
        }
        if gens.iter().any(Rational::is_zero) {
            return domain("generators must be strictly positive");
        }
        let mut sorted = gens.to_vec();
        sorted.sort();
        sorted.dedup();
        let l = common_denominator(&sorted);
        let weights: Vec<BigUint> = sorted.iter().map(|g| g.cleared(&l).unwrap()).collect();

        // a generator can only be built from strictly smaller ones
        let mut keep: Vec<usize> = Vec::new();
        for (i, w) in weights.iter().enumerate() {
            let smaller: Vec<BigUint> = keep.iter().map(|&k| weights[k].clone()).collect();
            let table = ResidueTable::new(&smaller);
            if smaller.is_empty() || knapsack::represent(table.as_ref(), &smaller, w).is_none() {
                keep.push(i);
            }
        }
        let atoms: Vec<Rational> = keep.iter().map(|&i| sorted[i].clone()).collect();
        Ok(Self::from_atoms(atoms))
    }

    fn from_atoms(atoms: Vec<Rational>) -> Self {
        let l = common_denominator(&atoms);
        let cleared = atoms.iter().map(|a| a.cleared(&l).unwrap()).collect();
        FiniteMonoid {
            atoms,
            common_denominator: l,
            cleared,
            table: OnceLock::new(),
        }
    }

    /// The atoms, ascending.
    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn is_atom(&self, x: &Rational) -> bool {
        self.atoms.binary_search(x).is_ok()
    }

    /// `lcm` of the atoms' denominators.
    pub fn common_denominator(&self) -> &BigUint {
        &self.common_denominator
    }

    /// The atoms multiplied by the common denominator.
    pub fn cleared_atoms(&self) -> &[BigUint] {
        &self.cleared
    }

    fn table(&self) -> Option<&ResidueTable> {
        self.table.get_or_init(|| ResidueTable::new(&self.cleared)).as_ref()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let Some(target) = x.cleared(&self.common_denominator) else {
            return false;
        };
        match self.table() {
            Some(t) => t.contains(&target),
            None => knapsack::search_representation(&self.cleared, &target).is_some(),
        }
    }

    /// One factorization of `x`, or `None` if `x` is not an element.
    pub fn factorization_of(&self, x: &Rational) -> Result<Option<Factorization>> {
        let Some(target) = x.cleared(&self.common_denominator) else {
            return Ok(None);
        };
        let Some(counts) = knapsack::represent(self.table(), &self.cleared, &target) else {
            return Ok(None);
        };
        let mut f = Factorization::empty();
        for (atom, c) in self.atoms.iter().zip(counts) {
            let c = c.to_u64().ok_or_else(|| {
                Error::TooLarge(format!("a factorization of {x} uses more than 2^64 copies of {atom}"))
            })?;
            f.add(atom.clone(), c);
        }
        debug_assert_eq!(&f.evaluate(), x);
        Ok(Some(f))
    }

    /// The isomorphic copy `q·M`.
    pub fn scaled(&self, q: &Rational) -> Result<FiniteMonoid> {
        if q.is_zero() {
            return domain("scaling by zero collapses the monoid");
        }
        Ok(Self::from_atoms(self.atoms.iter().map(|a| a * q).collect()))
    }
}

impl PartialEq for FiniteMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for FiniteMonoid {}

impl fmt::Display for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Rational::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMonoid{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn minimal_generators() {
        let m = FiniteMonoid::new(&[q("4"), q("6"), q("8"), q("9")]).unwrap();
        assert_eq!(m.atoms(), &[q("4"), q("6"), q("9")]);
        let m = FiniteMonoid::new(&[q("1/2"), q("3/2"), q("1/2")]).unwrap();
        assert_eq!(m.atoms(), &[q("1/2")]);
        assert!(FiniteMonoid::new(&[]).is_err());
        assert!(FiniteMonoid::new(&[Rational::zero()]).is_err());
    }

    #[test]
    fn membership_and_witness() {
        let m = FiniteMonoid::new(&[q("3/2"), q("5/2")]).unwrap();
        assert!(m.contains(&q("4")));
        assert!(!m.contains(&q("1/2")));
        assert!(!m.contains(&q("1/3")));
        let f = m.factorization_of(&q("4")).unwrap().unwrap();
        assert_eq!(f, Factorization::from_counts([(q("3/2"), 1), (q("5/2"), 1)]));
        let big = q("1000000000001/2");
        let f = m.factorization_of(&big).unwrap().unwrap();
        assert_eq!(f.evaluate(), big);
    }
}
