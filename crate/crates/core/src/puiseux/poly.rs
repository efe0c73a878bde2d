use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A polynomial in `n` with nonnegative integer coefficients, such as `n^2`
/// or `2*n^3 + n + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    /// `coeffs[k]` multiplies `n^k`; no trailing zeros.
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn from_coefficients(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `n^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Polynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, n: u64) -> Result<u64> {
        let overflow = || Error::TooLarge(format!("{self} overflows at n = {n}"));
        self.coeffs.iter().rev().try_fold(0u64, |acc, &c| {
            acc.checked_mul(n).and_then(|v| v.checked_add(c)).ok_or_else(overflow)
        })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "n".to_string(),
                (1, c) => format!("{c}*n"),
                (k, 1) => format!("n^{k}"),
                (k, c) => format!("{c}*n^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("cannot read polynomial '{s}': {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, power) = match term.find('n') {
                None => (term, None),
                Some(i) => (&term[..i], Some(&term[i + 1..])),
            };
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c: u64 = if coef.is_empty() {
                if power.is_none() {
                    return Err(bad("empty term"));
                }
                1
            } else {
                coef.parse()
                    .map_err(|_| bad("coefficients must be nonnegative integers"))?
            };
            let k: usize = match power {
                None => 0,
                Some("") => 1,
                Some(p) => p
                    .strip_prefix('^')
                    .ok_or_else(|| bad("expected '^' after n"))?
                    .parse()
                    .map_err(|_| bad("exponents must be nonnegative integers"))?,
            };
            if k > 64 {
                return Err(bad("degree above 64"));
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = coeffs[k].checked_add(c).ok_or_else(|| bad("coefficient overflow"))?;
        }
        Ok(Polynomial::from_coefficients(coeffs))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let f: Polynomial = "n^2".parse().unwrap();
        assert_eq!(f.eval(3).unwrap(), 9);
        let g: Polynomial = "2*n^3 + n + 1".parse().unwrap();
        assert_eq!(g.eval(2).unwrap(), 19);
        assert_eq!(g.to_string(), "2*n^3 + n + 1");
        let h: Polynomial = "3n^2+n".parse().unwrap();
        assert_eq!(h.coefficients(), &[0, 1, 3]);
        assert_eq!("n".parse::<Polynomial>().unwrap(), Polynomial::monomial(1));
        assert!("n^".parse::<Polynomial>().is_err());
        assert!("-n".parse::<Polynomial>().is_err());
        assert!("n*2".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["n^2", "n", "7", "n^3 + 4*n^2 + 2", "0"] {
            let p: Polynomial = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<Polynomial>().unwrap(), p);
        }
    }
}
