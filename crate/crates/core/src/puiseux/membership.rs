use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{prime_factors, Rational};
use crate::error::Result;
use crate::factor::Factorization;
use crate::knapsack::{self, ResidueTable};
use crate::numerical::NumericalMonoid;

use super::{Construction, FiniteMonoid, Geometric, GeometricStart, PrimeReciprocal, PuiseuxSpec};

/// Trial-division bound used when factoring denominators of queried elements.
const FACTOR_LIMIT: u64 = 10_000_000;

/// Why an element is certainly not in the monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// Exhaustive knapsack over every generator that could take part.
    Knapsack,
    /// A prime divides `d(x)` that no sum of generators can produce.
    DenominatorPrime { prime: u64 },
    /// The multiplicities forced modulo the denominator primes already exceed `x`.
    ForcedMultiplicity,
    /// The integer part left after the forced multiplicities is not a sum of
    /// generator numerators.
    IntegerPart,
}

/// Answer of [`PuiseuxSpec::member`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(Factorization),
    No(Exclusion),
    Unknown { depth_searched: usize },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Membership::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Membership::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&Factorization> {
        match self {
            Membership::Yes(f) => Some(f),
            _ => None,
        }
    }
}

impl Exclusion {
    pub fn tag(&self) -> &'static str {
        match self {
            Exclusion::Knapsack => "knapsack",
            Exclusion::DenominatorPrime { .. } => "denominatorPrime",
            Exclusion::ForcedMultiplicity => "forcedMultiplicity",
            Exclusion::IntegerPart => "integerPart",
        }
    }
}

impl Serialize for Membership {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Membership::Yes(f) => {
                map.serialize_entry("verdict", "yes")?;
                map.serialize_entry("factorization", f)?;
            }
            Membership::No(why) => {
                map.serialize_entry("verdict", "no")?;
                map.serialize_entry("reason", why.tag())?;
                if let Exclusion::DenominatorPrime { prime } = why {
                    map.serialize_entry("prime", prime)?;
                }
            }
            Membership::Unknown { depth_searched } => {
                map.serialize_entry("verdict", "unknown")?;
                map.serialize_entry("depthSearched", depth_searched)?;
            }
        }
        map.end()
    }
}

impl PuiseuxSpec {
    /// Decides `x ∈ M` where possible.
    ///
    /// Finite specs and geometric families with `r ≥ 1` started at a finite
    /// index are decided exactly, as are the prime-denominator families.
    /// Constructions are decided once the levels beyond the search provably
    /// exceed `x`. Anything else searches the truncation at `depth_limit` and
    /// answers `Unknown` when no witness turns up.
    pub fn member(&self, x: &Rational, depth_limit: usize) -> Result<Membership> {
        if x.is_zero() {
            return Ok(Membership::Yes(Factorization::empty()));
        }
        match self {
            PuiseuxSpec::Finite(gens) => decide(gens, x),
            PuiseuxSpec::Geometric(g) => member_geometric(g, x, depth_limit),
            PuiseuxSpec::PrimeReciprocal(f) => member_prime_reciprocal(f, x, depth_limit),
            PuiseuxSpec::PrimaryConstruction(c) => member_construction(c, x, depth_limit),
        }
    }
}

/// Exact answer over a finite set of generators, all of which may take part.
fn decide(gens: &[Rational], x: &Rational) -> Result<Membership> {
    let useful: Vec<Rational> = gens.iter().filter(|g| *g <= x).cloned().collect();
    if useful.is_empty() {
        return Ok(Membership::No(Exclusion::Knapsack));
    }
    Ok(match FiniteMonoid::new(&useful)?.factorization_of(x)? {
        Some(f) => Membership::Yes(f),
        None => Membership::No(Exclusion::Knapsack),
    })
}

/// Witness search in a truncation: `Yes` or `Unknown`, never `No`.
fn search(gens: &[Rational], x: &Rational, depth: usize) -> Result<Membership> {
    let useful: Vec<Rational> = gens.iter().filter(|g| *g <= x).cloned().collect();
    if !useful.is_empty() {
        if let Some(f) = FiniteMonoid::new(&useful)?.factorization_of(x)? {
            return Ok(Membership::Yes(f));
        }
    }
    Ok(Membership::Unknown { depth_searched: depth })
}

fn member_geometric(g: &Geometric, x: &Rational, depth_limit: usize) -> Result<Membership> {
    let r = g.ratio();
    let one = Rational::one();
    if *r == one {
        return decide(&[one], x);
    }

    // Denominators of elements only involve primes of d(r) (and of n(r) once
    // negative exponents occur).
    let mut allowed = r.denominator().clone();
    let negative = match g.start() {
        GeometricStart::From(k) => k < 0,
        GeometricStart::BiInfinite => true,
    };
    if negative {
        allowed *= r.numerator();
    }
    if let Some(ps) = prime_factors(x.denominator(), FACTOR_LIMIT) {
        if let Some(&p) = ps.iter().find(|&&p| !(&allowed % p).is_zero()) {
            return Ok(Membership::No(Exclusion::DenominatorPrime { prime: p }));
        }
    }

    match g.start() {
        GeometricStart::From(k) if *r > one => {
            // only the powers r^n ≤ x can appear
            let mut gens = Vec::new();
            let mut n = k;
            loop {
                let power = r.pow(n).expect("nonzero ratio");
                if &power > x {
                    break;
                }
                gens.push(power);
                n += 1;
            }
            decide(&gens, x)
        }
        _ => {
            let spec = PuiseuxSpec::Geometric(g.clone());
            search(&spec.generators_up_to(depth_limit.max(1))?, x, depth_limit)
        }
    }
}

/// `a^{-1} mod p` for prime `p` not dividing `a`.
fn inverse_mod(a: u64, p: u64) -> u64 {
    let (mut result, mut base, mut e) = (1u128, (a % p) as u128, p - 2);
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u64
}

fn residue(n: &BigUint, p: u64) -> u64 {
    (n % p).to_u64().expect("residue below p")
}

/// Exact membership for monoids `⟨n_p / p⟩` with pairwise coprime prime
/// denominators.
///
/// Write `x = u/v`. Comparing `P`-adic valuations, `v` must be squarefree
/// with every prime admissible, and the multiplicity `α_P` of `n_P/P` is
/// forced modulo `P` for each `P | v`. Subtracting the least forced
/// multiplicities leaves an integer `y`, and the remaining multiplicities are
/// multiples of their primes, contributing `Σ β_p n_p`. So `x ∈ M` exactly
/// when `y ≥ 0` lies in the monoid generated by the numerators `n_p`.
fn member_prime_reciprocal(f: &PrimeReciprocal, x: &Rational, depth_limit: usize) -> Result<Membership> {
    let v = x.denominator();
    let Some(ps) = prime_factors(v, FACTOR_LIMIT) else {
        let spec = PuiseuxSpec::PrimeReciprocal(*f);
        return search(&spec.generators_up_to(depth_limit.max(1))?, x, depth_limit);
    };
    let mut forced: Vec<(u64, u64)> = Vec::new();
    for &p in &ps {
        let pb = BigUint::from(p);
        if !f.admits(p) || (v % (&pb * &pb)).is_zero() {
            return Ok(Membership::No(Exclusion::DenominatorPrime { prime: p }));
        }
        // α n_p (v/p) ≡ u (mod p)
        let cofactor = residue(&(v / &pb), p);
        let unit = residue(&BigUint::from(f.numerator(p)), p);
        let alpha = (residue(x.numerator(), p) as u128 * inverse_mod(cofactor, p) as u128 % p as u128
            * inverse_mod(unit, p) as u128
            % p as u128) as u64;
        forced.push((p, alpha));
    }
    let forced_sum: Rational = forced
        .iter()
        .map(|&(p, a)| f.generator(p).scale(&BigUint::from(a)))
        .sum();
    let Some(rest) = x.checked_sub(&forced_sum) else {
        return Ok(Membership::No(Exclusion::ForcedMultiplicity));
    };
    let y = rest
        .to_integer()
        .expect("forced multiplicities clear every denominator");

    let g = f.numerator_gcd();
    if !(&y % g).is_zero() {
        return Ok(Membership::No(Exclusion::IntegerPart));
    }

    // numerators n_p are nondecreasing in p; collect those that can matter
    let mut numerators: Vec<(u64, u64)> = Vec::new();
    let mut running_gcd = 0u64;
    for p in f.admissible_primes() {
        let n = f.numerator(p);
        if BigUint::from(n) > y {
            break;
        }
        if numerators.iter().any(|&(m, _)| m == n) {
            continue;
        }
        numerators.push((n, p));
        running_gcd = running_gcd.gcd(&n);
        if running_gcd == g {
            let reduced: Vec<u64> = numerators.iter().map(|&(m, _)| m / g).collect();
            let (monoid, _) = NumericalMonoid::from_generators(&reduced)?;
            let frob = monoid.frobenius();
            if frob < 0 || BigUint::from(frob as u64) < &y / g {
                break;
            }
        }
    }

    let weights: Vec<BigUint> = numerators.iter().map(|&(n, _)| BigUint::from(n)).collect();
    let beta = if y.is_zero() {
        Some(vec![BigUint::zero(); weights.len()])
    } else if weights.is_empty() {
        None
    } else {
        knapsack::represent(ResidueTable::new(&weights).as_ref(), &weights, &y)
    };
    let Some(beta) = beta else {
        return Ok(Membership::No(Exclusion::IntegerPart));
    };

    let mut witness = Factorization::empty();
    let mut push = |p: u64, count: BigUint| -> Result<()> {
        let c = count.to_u64().ok_or_else(|| {
            crate::error::Error::TooLarge(format!("the witness for {x} needs more than 2^64 copies of one atom"))
        })?;
        witness.add(f.generator(p), c);
        Ok(())
    };
    for &(p, a) in &forced {
        push(p, BigUint::from(a))?;
    }
    for (&(_, p), b) in numerators.iter().zip(beta) {
        push(p, b * p)?;
    }
    debug_assert_eq!(&witness.evaluate(), x);
    Ok(Membership::Yes(witness))
}

/// Levels are searched in order; once every later level lies above `x`,
/// the generators collected so far decide membership exactly.
fn member_construction(c: &Construction, x: &Rational, depth_limit: usize) -> Result<Membership> {
    let mut gens: Vec<Rational> = Vec::new();
    for n in 1..=depth_limit.max(1) as u64 {
        gens.extend(c.level_generators(n)?.into_iter().filter(|g| g <= x));
        let next = c.level_lower_bound(n + 1)?;
        let increasing = c.growth_factor(n + 1)? >= BigUint::from(c.p());
        if &next > x && increasing && c.inequality_row(n + 1)?.holds {
            return decide(&gens, x);
        }
    }
    search(&gens, x, depth_limit)
}
