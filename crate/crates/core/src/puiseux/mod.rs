//! Puiseux monoids: additive submonoids of `ℚ≥0`.
//!
//! A [`PuiseuxSpec`] is either an explicit finite generating set or one of a
//! few infinitely generated families, described symbolically. Families are
//! never materialized. Questions about them are answered by closed forms
//! that hold for the whole family, or by computations on a finite
//! [truncation](PuiseuxSpec::truncate) whose depth is reported with the
//! answer.

mod construction;
mod finite;
mod membership;
mod poly;

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use construction::{Construction, InequalityRow};
pub use finite::FiniteMonoid;
pub use membership::{Exclusion, Membership};
pub use poly::Polynomial;

use crate::arith::{is_prime, primes, Rational};
use crate::error::{domain, Error, Result};
use crate::numerical::NumericalMonoid;

/// Levels of a [`Construction`] whose growth inequality is checked when a
/// spec is read from JSON.
pub const CONSTRUCTION_CHECK_DEPTH: u64 = 8;

/// Description of a Puiseux monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PuiseuxSpec {
    /// `⟨g_1, …, g_k⟩` with positive generators.
    Finite(Vec<Rational>),
    /// `⟨r^n : n ≥ k⟩` or `⟨r^n : n ∈ ℤ⟩`.
    Geometric(Geometric),
    /// `⟨φ(p) : p prime⟩` for one of three rational functions `φ`.
    PrimeReciprocal(PrimeReciprocal),
    /// `⟨q^{f(n)} s / p^n : n ≥ 1, s ∈ S_n⟩`.
    PrimaryConstruction(Construction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometricStart {
    /// Exponents `k, k+1, k+2, …`.
    From(i64),
    /// All integer exponents.
    BiInfinite,
}

/// The monoid generated by the powers of a positive rational `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometric {
    ratio: Rational,
    start: GeometricStart,
}

impl Geometric {
    pub fn new(ratio: Rational, start: GeometricStart) -> Result<Self> {
        if ratio.is_zero() {
            return domain("the ratio of a geometric family must be positive");
        }
        Ok(Geometric { ratio, start })
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn start(&self) -> GeometricStart {
        self.start
    }

    /// Both `n(r)` and `d(r)` exceed one, so the powers of `r` are exactly the atoms.
    pub fn has_power_atoms(&self) -> bool {
        !self.ratio.numerator().is_one() && !self.ratio.denominator().is_one()
    }

    fn power(&self, k: i64) -> Rational {
        self.ratio.pow(k).expect("nonzero ratio")
    }

    /// Exponents of the first `depth` generators in canonical order.
    fn exponents(&self, depth: usize) -> Vec<i64> {
        let d = depth as i64;
        match self.start {
            GeometricStart::From(k) => (k..k + d).collect(),
            GeometricStart::BiInfinite => (-d..=d).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReciprocalForm {
    /// `1/p`
    Reciprocal,
    /// `(p-1)/p`
    PredecessorOverPrime,
    /// `(p^2+1)/p`
    SquarePlusOneOverPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeFilter {
    All,
    Odd,
}

/// Monoids generated by `φ(p)` over all primes, or over the odd primes.
///
/// Every generator has a prime denominator, so denominators are pairwise
/// coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeReciprocal {
    pub form: ReciprocalForm,
    pub primes: PrimeFilter,
}

impl PrimeReciprocal {
    pub fn new(form: ReciprocalForm, primes: PrimeFilter) -> Self {
        PrimeReciprocal { form, primes }
    }

    pub fn admits(&self, p: u64) -> bool {
        is_prime(p) && (self.primes == PrimeFilter::All || p != 2)
    }

    pub fn admissible_primes(&self) -> impl Iterator<Item = u64> {
        let filter = self.primes;
        primes().filter(move |&p| filter == PrimeFilter::All || p != 2)
    }

    /// The numerator of `φ(p)`, already coprime to `p`.
    pub fn numerator(&self, p: u64) -> u64 {
        match self.form {
            ReciprocalForm::Reciprocal => 1,
            ReciprocalForm::PredecessorOverPrime => p - 1,
            ReciprocalForm::SquarePlusOneOverPrime => p * p + 1,
        }
    }

    pub fn generator(&self, p: u64) -> Rational {
        Rational::new(self.numerator(p), p).expect("prime denominator")
    }

    pub fn generators(&self, depth: usize) -> Vec<Rational> {
        self.admissible_primes()
            .take(depth)
            .map(|p| self.generator(p))
            .collect()
    }

    /// 1-based position of `p` in the enumeration of admissible primes.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        if !self.admits(p) {
            return None;
        }
        self.admissible_primes().position(|q| q == p).map(|i| i + 1)
    }

    /// gcd of all numerators `n(φ(p))`.
    ///
    /// Over odd primes both `p - 1` and `p^2 + 1` are even, and `2` resp.
    /// `10, 26` occur, so the gcd is 2; otherwise a numerator is 1 or the
    /// numerators 5, 10, 26 occur.
    pub fn numerator_gcd(&self) -> u64 {
        match (self.form, self.primes) {
            (ReciprocalForm::Reciprocal, _) => 1,
            (_, PrimeFilter::All) => 1,
            (_, PrimeFilter::Odd) => 2,
        }
    }
}

impl fmt::Display for ReciprocalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReciprocalForm::Reciprocal => "1/p",
            ReciprocalForm::PredecessorOverPrime => "(p-1)/p",
            ReciprocalForm::SquarePlusOneOverPrime => "(p^2+1)/p",
        })
    }
}

impl std::str::FromStr for ReciprocalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        match compact.as_str() {
            "1/p" => Ok(ReciprocalForm::Reciprocal),
            "(p-1)/p" => Ok(ReciprocalForm::PredecessorOverPrime),
            "(p^2+1)/p" | "(p²+1)/p" => Ok(ReciprocalForm::SquarePlusOneOverPrime),
            _ => Err(Error::Parse(format!(
                "unknown form '{s}'; expected \"1/p\", \"(p-1)/p\" or \"(p^2+1)/p\""
            ))),
        }
    }
}

impl Serialize for ReciprocalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReciprocalForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for PrimeFilter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            PrimeFilter::All => "all",
            PrimeFilter::Odd => "odd",
        })
    }
}

impl<'de> Deserialize<'de> for PrimeFilter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(deserializer)?.as_str() {
            "all" => Ok(PrimeFilter::All),
            "odd" => Ok(PrimeFilter::Odd),
            other => Err(serde::de::Error::custom(format!(
                "unknown prime filter '{other}'; expected \"all\" or \"odd\""
            ))),
        }
    }
}

/// A three-valued answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Serialize for Truth {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Truth::True => serializer.serialize_bool(true),
            Truth::False => serializer.serialize_bool(false),
            Truth::Unknown => serializer.serialize_str("unknown"),
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

/// Transfer-theoretic classification of a Puiseux monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub transfer_finite: bool,
    pub transfer_krull: bool,
    pub krull: bool,
    pub c_monoid: bool,
    pub evidence: String,
}

impl Classification {
    fn cyclic(evidence: impl Into<String>) -> Self {
        Classification {
            transfer_finite: true,
            transfer_krull: true,
            krull: true,
            c_monoid: true,
            evidence: evidence.into(),
        }
    }

    fn numerical(evidence: impl Into<String>) -> Self {
        Classification {
            transfer_finite: true,
            transfer_krull: false,
            krull: false,
            c_monoid: true,
            evidence: evidence.into(),
        }
    }

    fn infinite(evidence: impl Into<String>) -> Self {
        Classification {
            transfer_finite: false,
            transfer_krull: false,
            krull: false,
            c_monoid: false,
            evidence: evidence.into(),
        }
    }
}

const EVIDENCE_CYCLIC: &str = "generated by one element: isomorphic to (N0,+), a Krull monoid (Krull iff cyclic)";
const EVIDENCE_NUMERICAL: &str =
    "finitely generated with at least two atoms: isomorphic to a proper numerical monoid, \
     hence transfer finite and a C-monoid, but not transfer Krull";
const EVIDENCE_INFINITE_ATOMS: &str = "infinitely many atoms: not isomorphic to a numerical monoid, \
     hence neither transfer finite, transfer Krull, Krull nor a C-monoid";
const EVIDENCE_NO_ATOMS: &str = "not finitely generated (no atoms): not isomorphic to a numerical monoid, \
     hence neither transfer finite, transfer Krull, Krull nor a C-monoid";

impl PuiseuxSpec {
    /// `⟨gens⟩`; every generator must be positive.
    pub fn finite(gens: Vec<Rational>) -> Result<Self> {
        check_finite(&gens)?;
        Ok(PuiseuxSpec::Finite(gens))
    }

    pub fn geometric(ratio: Rational, start: GeometricStart) -> Result<Self> {
        Ok(PuiseuxSpec::Geometric(Geometric::new(ratio, start)?))
    }

    pub fn prime_reciprocal(form: ReciprocalForm, primes: PrimeFilter) -> Self {
        PuiseuxSpec::PrimeReciprocal(PrimeReciprocal::new(form, primes))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PuiseuxSpec::Finite(_))
    }

    /// The first `depth` generators of the family in canonical order.
    ///
    /// A finite spec returns all of its generators regardless of `depth`.
    /// Bi-infinite geometric families return the `2·depth + 1` powers with
    /// exponents `-depth..=depth`; constructions return every generator on
    /// levels `1..=depth`.
    pub fn generators_up_to(&self, depth: usize) -> Result<Vec<Rational>> {
        if depth == 0 {
            return domain("truncation depth must be at least 1");
        }
        let mut gens = match self {
            PuiseuxSpec::Finite(gens) => {
                check_finite(gens)?;
                gens.clone()
            }
            PuiseuxSpec::Geometric(g) => g.exponents(depth).into_iter().map(|k| g.power(k)).collect(),
            PuiseuxSpec::PrimeReciprocal(f) => f.generators(depth),
            PuiseuxSpec::PrimaryConstruction(c) => {
                let mut out = Vec::new();
                for n in 1..=depth as u64 {
                    out.extend(c.level_generators(n)?);
                }
                out
            }
        };
        let mut seen = std::collections::HashSet::new();
        gens.retain(|g| seen.insert(g.clone()));
        Ok(gens)
    }

    /// The finitely generated submonoid spanned by the first `depth` generators.
    pub fn truncate(&self, depth: usize) -> Result<PuiseuxSpec> {
        Ok(PuiseuxSpec::Finite(self.generators_up_to(depth)?))
    }

    /// Atoms: the minimal generating set of a finite spec, or the first atoms
    /// of a family from its closed-form atom set, each confirmed as an atom of
    /// the depth-`depth` truncation.
    pub fn atoms_up_to(&self, depth: usize) -> Result<Vec<Rational>> {
        if depth == 0 {
            return domain("depth must be at least 1");
        }
        match self {
            PuiseuxSpec::Finite(gens) => Ok(FiniteMonoid::new(gens)?.atoms().to_vec()),
            PuiseuxSpec::Geometric(g) => {
                let r = &g.ratio;
                if r.is_one_value() {
                    return Ok(vec![Rational::one()]);
                }
                if let (true, GeometricStart::From(k)) = (r.denominator().is_one(), g.start) {
                    // every power r^j with j ≥ k is an integer multiple of r^k
                    return Ok(vec![g.power(k)]);
                }
                if !g.has_power_atoms() {
                    return Err(Error::AtomicityUnknown(format!(
                        "the powers of {r} are atoms only when n(r) > 1 and d(r) > 1"
                    )));
                }
                let candidates = self.generators_up_to(depth)?;
                confirm_atoms(candidates)
            }
            PuiseuxSpec::PrimeReciprocal(f) => confirm_atoms(f.generators(depth)),
            PuiseuxSpec::PrimaryConstruction(c) => {
                // levels beyond `depth` lie above every generator up to `depth`
                c.validate(depth as u64 + 1)?;
                Ok(FiniteMonoid::new(&self.generators_up_to(depth)?)?.atoms().to_vec())
            }
        }
    }

    /// Whether `0` is a limit point of `M \ {0}`.
    pub fn zero_is_limit_point(&self) -> Truth {
        match self {
            PuiseuxSpec::Finite(_) => Truth::False,
            PuiseuxSpec::Geometric(g) => {
                if g.ratio.is_one_value() {
                    Truth::False
                } else {
                    match g.start {
                        GeometricStart::BiInfinite => Truth::True,
                        GeometricStart::From(_) => (g.ratio < Rational::one()).into(),
                    }
                }
            }
            PuiseuxSpec::PrimeReciprocal(f) => (f.form == ReciprocalForm::Reciprocal).into(),
            PuiseuxSpec::PrimaryConstruction(_) => Truth::False,
        }
    }

    /// `True` when the monoid is certainly a BF-monoid because `0` is not a
    /// limit point; `Unknown` otherwise, as that criterion is only sufficient.
    pub fn is_bf_witnessed(&self) -> Truth {
        match self.zero_is_limit_point() {
            Truth::False => Truth::True,
            _ => Truth::Unknown,
        }
    }

    /// Decides transfer finiteness, transfer Krull, Krull and C-monoid.
    pub fn classify(&self) -> Result<Classification> {
        Ok(match self {
            PuiseuxSpec::Finite(gens) => {
                let m = FiniteMonoid::new(gens)?;
                if m.atoms().len() == 1 {
                    Classification::cyclic(EVIDENCE_CYCLIC)
                } else {
                    Classification::numerical(EVIDENCE_NUMERICAL)
                }
            }
            PuiseuxSpec::Geometric(g) => {
                let finite_start = matches!(g.start, GeometricStart::From(_));
                if g.ratio.is_one_value() || (g.ratio.denominator().is_one() && finite_start) {
                    Classification::cyclic(EVIDENCE_CYCLIC)
                } else if g.has_power_atoms() {
                    Classification::infinite(EVIDENCE_INFINITE_ATOMS)
                } else {
                    Classification::infinite(EVIDENCE_NO_ATOMS)
                }
            }
            PuiseuxSpec::PrimeReciprocal(_) => Classification::infinite(EVIDENCE_INFINITE_ATOMS),
            PuiseuxSpec::PrimaryConstruction(c) => {
                if c.p() == 1 {
                    // every generator is an integer multiple of q lying in q·S_1
                    if c.level_monoid(1).generators() == [1] {
                        Classification::cyclic(EVIDENCE_CYCLIC)
                    } else {
                        Classification::numerical(EVIDENCE_NUMERICAL)
                    }
                } else {
                    Classification::infinite(EVIDENCE_INFINITE_ATOMS)
                }
            }
        })
    }
}

fn check_finite(gens: &[Rational]) -> Result<()> {
    if gens.is_empty() {
        return domain("a finite spec needs at least one generator");
    }
    if gens.iter().any(Rational::is_zero) {
        return domain("generators must be strictly positive");
    }
    Ok(())
}

fn confirm_atoms(candidates: Vec<Rational>) -> Result<Vec<Rational>> {
    let truncation = FiniteMonoid::new(&candidates)?;
    if let Some(bad) = candidates.iter().find(|c| !truncation.is_atom(c)) {
        return domain(format!("closed-form atom {bad} is not an atom of its truncation"));
    }
    Ok(candidates)
}

impl Rational {
    fn is_one_value(&self) -> bool {
        self.numerator().is_one() && self.denominator().is_one()
    }
}

impl fmt::Display for PuiseuxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PuiseuxSpec::Finite(gens) => {
                let parts: Vec<String> = gens.iter().map(Rational::to_string).collect();
                write!(f, "⟨{}⟩", parts.join(", "))
            }
            PuiseuxSpec::Geometric(g) => match g.start {
                GeometricStart::From(k) => write!(f, "⟨({})^n : n ≥ {k}⟩", g.ratio),
                GeometricStart::BiInfinite => write!(f, "⟨({})^n : n ∈ Z⟩", g.ratio),
            },
            PuiseuxSpec::PrimeReciprocal(r) => {
                let which = if r.primes == PrimeFilter::Odd {
                    "odd prime"
                } else {
                    "prime"
                };
                write!(f, "⟨{} : p {which}⟩", r.form)
            }
            PuiseuxSpec::PrimaryConstruction(c) => {
                write!(f, "⟨{}^({}) s / {}^n : s ∈ S_n⟩", c.q(), c.f(), c.p())
            }
        }
    }
}

// JSON forms

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
enum SpecRepr {
    Finite {
        generators: Vec<Rational>,
    },
    Numerical {
        generators: Vec<u64>,
    },
    Geometric {
        ratio: Rational,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from: Option<i64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        biinfinite: bool,
    },
    PrimeReciprocal {
        form: ReciprocalForm,
        primes: PrimeFilter,
    },
    PrimaryConstruction {
        p: u64,
        q: u64,
        f: Polynomial,
        #[serde(rename = "Sn")]
        sn: Vec<Vec<u64>>,
    },
}

impl TryFrom<SpecRepr> for PuiseuxSpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::Finite { generators } => PuiseuxSpec::finite(generators),
            SpecRepr::Numerical { generators } => {
                PuiseuxSpec::finite(generators.into_iter().map(Rational::from).collect())
            }
            SpecRepr::Geometric {
                ratio,
                from,
                biinfinite,
            } => {
                let start = match (from, biinfinite) {
                    (Some(_), true) => return domain("a geometric spec takes either \"from\" or \"biinfinite\""),
                    (_, true) => GeometricStart::BiInfinite,
                    (k, false) => GeometricStart::From(k.unwrap_or(1)),
                };
                PuiseuxSpec::geometric(ratio, start)
            }
            SpecRepr::PrimeReciprocal { form, primes } => Ok(PuiseuxSpec::prime_reciprocal(form, primes)),
            SpecRepr::PrimaryConstruction { p, q, f, sn } => {
                let chain = sn
                    .iter()
                    .map(|gens| NumericalMonoid::new(gens))
                    .collect::<Result<Vec<_>>>()?;
                let c = Construction::new(p, q, f, chain)?;
                c.validate(CONSTRUCTION_CHECK_DEPTH)?;
                Ok(PuiseuxSpec::PrimaryConstruction(c))
            }
        }
    }
}

impl From<&PuiseuxSpec> for SpecRepr {
    fn from(spec: &PuiseuxSpec) -> Self {
        match spec {
            PuiseuxSpec::Finite(gens) => SpecRepr::Finite {
                generators: gens.clone(),
            },
            PuiseuxSpec::Geometric(g) => match g.start {
                GeometricStart::From(k) => SpecRepr::Geometric {
                    ratio: g.ratio.clone(),
                    from: Some(k),
                    biinfinite: false,
                },
                GeometricStart::BiInfinite => SpecRepr::Geometric {
                    ratio: g.ratio.clone(),
                    from: None,
                    biinfinite: true,
                },
            },
            PuiseuxSpec::PrimeReciprocal(r) => SpecRepr::PrimeReciprocal {
                form: r.form,
                primes: r.primes,
            },
            PuiseuxSpec::PrimaryConstruction(c) => SpecRepr::PrimaryConstruction {
                p: c.p(),
                q: c.q(),
                f: c.f().clone(),
                sn: c.chain().iter().map(|s| s.generators().to_vec()).collect(),
            },
        }
    }
}

impl Serialize for PuiseuxSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PuiseuxSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        PuiseuxSpec::try_from(repr).map_err(serde::de::Error::custom)
    }
}
