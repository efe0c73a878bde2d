//! Exact nonnegative rational arithmetic.
//!
//! [`Rational`] is the scalar used everywhere in the crate. Values are kept
//! in lowest terms with a positive denominator, and zero is `0/1`, so
//! [`Rational::numerator`] and [`Rational::denominator`] are defined for
//! every value, zero included.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A nonnegative rational number in reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<BigUint>);

/// Builds the reduced form of `num/den`.
pub fn normalize(num: BigUint, den: BigUint) -> Result<Rational> {
    if den.is_zero() {
        return domain("denominator must be positive");
    }
    Ok(Rational(Ratio::new(num, den)))
}

impl Rational {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        normalize(num.into(), den.into())
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        Rational(Ratio::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    /// The integer value, if the denominator is one.
    pub fn to_integer(&self) -> Option<BigUint> {
        self.is_integer().then(|| self.numerator().clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_integer().and_then(|n| n.to_u64())
    }

    /// `self - other`, or `None` when the difference is negative.
    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        if other > self {
            return None;
        }
        let num = self.numerator() * other.denominator() - other.numerator() * self.denominator();
        let den = self.denominator() * other.denominator();
        Some(Rational(Ratio::new(num, den)))
    }

    pub fn checked_div(&self, other: &Rational) -> Option<Rational> {
        if other.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &other.0))
        }
    }

    pub fn recip(&self) -> Option<Rational> {
        Rational::one().checked_div(self)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Option<Rational> {
        let e = u32::try_from(exp.unsigned_abs()).ok()?;
        let num = self.numerator().pow(e);
        let den = self.denominator().pow(e);
        if exp >= 0 {
            Some(Rational(Ratio::new_raw(num, den)))
        } else if num.is_zero() {
            None
        } else {
            Some(Rational(Ratio::new_raw(den, num)))
        }
    }

    pub fn scale(&self, k: &BigUint) -> Rational {
        Rational(&self.0 * Ratio::from_integer(k.clone()))
    }

    /// `self * k` as an integer when `k` clears the denominator.
    pub fn cleared(&self, k: &BigUint) -> Option<BigUint> {
        let (quot, rem) = k.div_rem(self.denominator());
        rem.is_zero().then(|| quot * self.numerator())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator().is_one() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(['.', 'e', 'E']) {
            return Err(Error::Parse(format!(
                "'{s}' looks like a float; rationals are written exactly as a/b"
            )));
        }
        if s.starts_with('-') {
            return Err(Error::Parse(format!(
                "'{s}' is negative; only nonnegative rationals exist here"
            )));
        }
        let parse =
            |t: &str| BigUint::from_str(t.trim()).map_err(|_| Error::Parse(format!("'{s}' is not a rational a/b")));
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse(d)?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("'{s}' has a zero denominator")));
                }
                normalize(parse(n)?, den)
            }
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

/// Panics on division by zero, like the integer operators.
impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero rational")
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| &acc + x)
    }
}

/// A p-adic valuation; `Infinity` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// Exponent of the prime `p` in `n`; `n` must be nonzero.
pub(crate) fn int_valuation(p: u64, n: &BigUint) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q) = v_p(n(q)) - v_p(d(q))`, with `v_p(0) = ∞`.
pub fn padic_valuation(p: u64, q: &Rational) -> Result<Valuation> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinity);
    }
    Ok(Valuation::Finite(
        int_valuation(p, q.numerator()) - int_valuation(p, q.denominator()),
    ))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// Distinct prime factors of `n` in increasing order, by trial division.
///
/// Returns `None` when a cofactor above 2^64 survives trial division up to
/// `limit`.
pub(crate) fn prime_factors(n: &BigUint, limit: u64) -> Option<Vec<u64>> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() && !n.is_zero() {
        if let Some(small) = n.to_u64() {
            if d.saturating_mul(d) > small {
                out.push(small);
                break;
            }
        } else if d > limit {
            return None;
        }
        let db = BigUint::from(d);
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Some(out)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigUint {
    values
        .into_iter()
        .fold(BigUint::one(), |acc, q| acc.lcm(q.denominator()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_reduces() {
        assert_eq!(Rational::new(6u32, 4u32).unwrap(), q("3/2"));
        assert_eq!(Rational::new(0u32, 7u32).unwrap().to_string(), "0");
        assert_eq!(Rational::new(0u32, 7u32).unwrap().denominator(), &BigUint::one());
        assert_eq!(Rational::new(35u32, 10u32).unwrap().to_string(), "7/2");
        assert!(matches!(Rational::new(1u32, 0u32), Err(Error::Domain(_))));
    }

    #[test]
    fn numerator_and_denominator() {
        let x = q("3/2");
        assert_eq!(
            (x.numerator().clone(), x.denominator().clone()),
            (3u32.into(), 2u32.into())
        );
        let x = q("7");
        assert_eq!(
            (x.numerator().clone(), x.denominator().clone()),
            (7u32.into(), 1u32.into())
        );
        let z = Rational::zero();
        assert_eq!(
            (z.numerator().clone(), z.denominator().clone()),
            (0u32.into(), 1u32.into())
        );
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(2, &q("3/8")).unwrap(), Valuation::Finite(-3));
        assert_eq!(padic_valuation(3, &q("9/5")).unwrap(), Valuation::Finite(2));
        assert_eq!(padic_valuation(5, &Rational::zero()).unwrap(), Valuation::Infinity);
        assert!(padic_valuation(4, &q("1/2")).is_err());
        assert!(padic_valuation(1, &q("1/2")).is_err());
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(q("10/4").to_string(), "5/2");
        assert_eq!(q(" 4/2 ").to_string(), "2");
        assert!("1.5".parse::<Rational>().is_err());
        assert!("-1/2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        let json = serde_json::to_string(&q("3/2")).unwrap();
        assert_eq!(json, "\"3/2\"");
        assert_eq!(serde_json::from_str::<Rational>("\"6/4\"").unwrap(), q("3/2"));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&q("1/2") + &q("1/3"), q("5/6"));
        assert_eq!(q("1/2").checked_sub(&q("1/3")), Some(q("1/6")));
        assert_eq!(q("1/3").checked_sub(&q("1/2")), None);
        assert_eq!(q("3/2").pow(-2), Some(q("4/9")));
        assert_eq!(Rational::zero().pow(-1), None);
        assert_eq!(q("3/4").cleared(&BigUint::from(8u32)), Some(BigUint::from(6u32)));
        assert_eq!(q("3/4").cleared(&BigUint::from(6u32)), None);
        assert_eq!(common_denominator(&[q("1/4"), q("5/6")]), BigUint::from(12u32));
    }

    #[test]
    fn primes_and_factors() {
        assert_eq!(primes().take(6).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(prime_factors(&BigUint::from(360u32), 1000), Some(vec![2, 3, 5]));
        assert_eq!(prime_factors(&BigUint::from(1u32), 1000), Some(vec![]));
        assert_eq!(prime_factors(&BigUint::from(97u32), 1000), Some(vec![97]));
    }
}
