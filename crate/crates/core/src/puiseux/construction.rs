use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::Serialize;

use crate::arith::Rational;
use crate::error::{domain, Error, Result};
use crate::numerical::NumericalMonoid;
use crate::puiseux::poly::Polynomial;
use crate::ser_display;

/// The monoid `⟨q^{f(n)} s / p^n : n ≥ 1, s ∈ S_n⟩` built from an
/// inclusion-decreasing chain of numerical monoids.
///
/// The chain is given as a finite list and continues with its last entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    p: u64,
    q: u64,
    f: Polynomial,
    chain: Vec<NumericalMonoid>,
}

/// One instance of the growth inequality
/// `q^{f(n+1) - f(n)} - p^n > p · max{F(S_n), a : a ∈ A(S_n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityRow {
    pub n: u64,
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub rhs: BigInt,
    pub holds: bool,
}

impl Construction {
    /// Checks `gcd(p, q) = 1`, `f(1) = 1` and that the chain decreases.
    pub fn new(p: u64, q: u64, f: Polynomial, chain: Vec<NumericalMonoid>) -> Result<Self> {
        if p == 0 || q == 0 {
            return domain("p and q must be positive");
        }
        if p.gcd(&q) != 1 {
            return domain(format!("gcd({p}, {q}) = {} but p and q must be coprime", p.gcd(&q)));
        }
        if f.eval(1)? != 1 {
            return domain(format!("f(1) must equal 1, got f(1) = {}", f.eval(1)?));
        }
        if chain.is_empty() {
            return domain("the chain S_n needs at least one numerical monoid");
        }
        for (i, pair) in chain.windows(2).enumerate() {
            if !pair[0].includes(&pair[1]) {
                return domain(format!(
                    "S_{} = {} is not contained in S_{} = {}",
                    i + 2,
                    pair[1],
                    i + 1,
                    pair[0]
                ));
            }
        }
        Ok(Construction { p, q, f, chain })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn chain(&self) -> &[NumericalMonoid] {
        &self.chain
    }

    /// `S_n` for `n ≥ 1`.
    pub fn level_monoid(&self, n: u64) -> &NumericalMonoid {
        let i = (n.max(1) - 1) as usize;
        &self.chain[i.min(self.chain.len() - 1)]
    }

    fn exponent(&self, n: u64) -> Result<u32> {
        let e = self.f.eval(n)?;
        u32::try_from(e).map_err(|_| Error::TooLarge(format!("f({n}) = {e} is too large an exponent")))
    }

    fn level_n_u32(n: u64) -> Result<u32> {
        u32::try_from(n).map_err(|_| Error::TooLarge(format!("level {n} is out of range")))
    }

    /// `q^{f(n)} a / p^n` for each atom `a` of `S_n`, ascending.
    pub fn level_generators(&self, n: u64) -> Result<Vec<Rational>> {
        let scale = self.level_lower_bound(n)?;
        Ok(self
            .level_monoid(n)
            .generators()
            .iter()
            .map(|&a| scale.scale(&BigUint::from(a)))
            .collect())
    }

    /// `q^{f(n)} / p^n`, a lower bound for every generator on level `n`.
    pub fn level_lower_bound(&self, n: u64) -> Result<Rational> {
        let num = BigUint::from(self.q).pow(self.exponent(n)?);
        let den = BigUint::from(self.p).pow(Self::level_n_u32(n)?);
        Rational::new(num, den)
    }

    /// `q^{f(n+1) - f(n)}`.
    pub(crate) fn growth_factor(&self, n: u64) -> Result<BigUint> {
        let lo = self.exponent(n)?;
        let hi = self.exponent(n + 1)?;
        Ok(BigUint::from(self.q).pow(hi.saturating_sub(lo)))
    }

    /// The growth inequality at level `n`.
    pub fn inequality_row(&self, n: u64) -> Result<InequalityRow> {
        let s = self.level_monoid(n);
        let lhs = BigInt::from(self.growth_factor(n)?) - BigInt::from(BigUint::from(self.p).pow(Self::level_n_u32(n)?));
        let max_atom = *s.generators().last().unwrap() as i64;
        let rhs = BigInt::from(self.p) * BigInt::from(s.frobenius().max(max_atom));
        let holds = lhs > rhs;
        Ok(InequalityRow { n, lhs, rhs, holds })
    }

    /// Rows for `n = 1..=depth`, whether or not they hold.
    pub fn inequality_report(&self, depth: u64) -> Result<Vec<InequalityRow>> {
        (1..=depth).map(|n| self.inequality_row(n)).collect()
    }

    /// The report for `n = 1..=depth`, or an error naming the first failing `n`.
    pub fn validate(&self, depth: u64) -> Result<Vec<InequalityRow>> {
        let rows = self.inequality_report(depth)?;
        if let Some(bad) = rows.iter().find(|r| !r.holds) {
            return Err(Error::Construction {
                n: bad.n,
                lhs: bad.lhs.to_string(),
                rhs: bad.rhs.to_string(),
            });
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(f: &str) -> Construction {
        Construction::new(2, 3, f.parse().unwrap(), vec![NumericalMonoid::new(&[3, 5]).unwrap()]).unwrap()
    }

    #[test]
    fn hypotheses_checked() {
        let s = vec![NumericalMonoid::new(&[3, 5]).unwrap()];
        assert!(Construction::new(2, 4, "n^2".parse().unwrap(), s.clone()).is_err());
        assert!(Construction::new(2, 3, "n^2 + 1".parse().unwrap(), s.clone()).is_err());
        let increasing = vec![
            NumericalMonoid::new(&[3, 5]).unwrap(),
            NumericalMonoid::new(&[2, 3]).unwrap(),
        ];
        assert!(Construction::new(2, 3, "n^2".parse().unwrap(), increasing).is_err());
        let decreasing = vec![
            NumericalMonoid::new(&[2, 3]).unwrap(),
            NumericalMonoid::new(&[3, 5]).unwrap(),
        ];
        assert!(Construction::new(2, 3, "n^2".parse().unwrap(), decreasing).is_ok());
    }

    #[test]
    fn inequality_instances() {
        let c = example("n^2");
        let rows = c.validate(4).unwrap();
        for row in &rows {
            // 3^{2n+1} - 2^n against 14
            let expected = BigInt::from(3u32).pow(2 * row.n as u32 + 1) - BigInt::from(2u32).pow(row.n as u32);
            assert_eq!(row.lhs, expected);
            assert_eq!(row.rhs, BigInt::from(14));
        }
        assert_eq!(rows[0].lhs, BigInt::from(25));
        let err = example("n").validate(3).unwrap_err();
        assert!(matches!(err, Error::Construction { n: 1, .. }));
    }

    #[test]
    fn level_generators_expand() {
        let c = example("n^2");
        let q = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(c.level_generators(1).unwrap(), vec![q("9/2"), q("15/2")]);
        assert_eq!(c.level_generators(2).unwrap(), vec![q("243/4"), q("405/4")]);
    }
}
