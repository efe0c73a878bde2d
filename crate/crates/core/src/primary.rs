//! Strongly primary and finitary monoids.
//!
//! A monoid is finitary when `n·M• ⊆ S + M` for some `n ∈ ℕ` and finite
//! `S ⊆ M•`. For infinitely generated families that statement is checked on
//! a bounded window only, and the window is part of every certificate. The
//! valuation refutation is different: when denominators are pairwise coprime
//! it disproves a candidate `(n, S)` outright.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{common_denominator, Rational};
use crate::error::{domain, Error, Result};
use crate::factor::Factorization;
use crate::numerical::NumericalMonoid;
use crate::puiseux::{Construction, FiniteMonoid, InequalityRow, Membership, Polynomial, PuiseuxSpec};

/// Largest cleared range `L·x_bound` the certificate sweep tabulates.
pub const SWEEP_LIMIT: u64 = 1 << 26;

/// One verified instance `n·x = s + (n·x - s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub x: Rational,
    pub s: Rational,
    /// A factorization of `n·x - s` in the monoid.
    pub rest: Factorization,
}

/// The region a certificate was checked on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Scope {
    pub x_bound: Rational,
    pub depth: usize,
    pub elements_checked: usize,
}

/// `n·x ∈ S + M` for every nonzero `x` of the truncation with `x ≤ x_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitaryCertificate {
    pub n: u64,
    #[serde(rename = "S")]
    pub s: Vec<Rational>,
    pub scope: Scope,
    pub checks: Vec<CheckRecord>,
}

/// The first element of the sweep for which `n·x ∉ S + M` was not confirmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureWitness {
    pub n: u64,
    #[serde(rename = "S")]
    pub s: Vec<Rational>,
    pub x: Rational,
    /// Truncation level at which `x` first appears.
    pub level: usize,
    /// `true` when every `n·x - s` was excluded; `false` when some membership
    /// query stayed undecided at the given depth.
    pub conclusive: bool,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateOutcome {
    Certified(FinitaryCertificate),
    Failed(FailureWitness),
}

impl CertificateOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertificateOutcome::Certified(_))
    }
}

impl Serialize for CertificateOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CertificateOutcome::Certified(c) => tagged(serializer, "scopedCertificate", c),
            CertificateOutcome::Failed(f) => tagged(serializer, "failureWitness", f),
        }
    }
}

fn tagged<S: Serializer, T: Serialize>(serializer: S, kind: &str, value: &T) -> std::result::Result<S::Ok, S::Error> {
    let body = serde_json::to_value(value).map_err(serde::ser::Error::custom)?;
    let mut map = serializer.serialize_map(None)?;
    map.serialize_entry("kind", kind)?;
    if let serde_json::Value::Object(fields) = body {
        for (k, v) in fields {
            map.serialize_entry(&k, &v)?;
        }
    }
    map.end()
}

/// Nonzero elements of the depth-`depth` truncation up to `x_bound`, ordered
/// by the level at which they first appear and then by value.
fn graded_elements(spec: &PuiseuxSpec, x_bound: &Rational, depth: usize) -> Result<Vec<(usize, Rational)>> {
    let levels: Vec<Vec<Rational>> = (1..=depth).map(|k| spec.generators_up_to(k)).collect::<Result<_>>()?;
    let deepest = levels.last().expect("depth ≥ 1");
    let l = common_denominator(deepest);
    let top = x_bound.scale(&l);
    let top = (top.numerator() / top.denominator())
        .to_u64()
        .filter(|&t| t <= SWEEP_LIMIT)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "sweeping up to {x_bound} at depth {depth} needs too large a table"
            ))
        })? as usize;

    let mut first_level: Vec<Option<u16>> = vec![None; top + 1];
    first_level[0] = Some(0);
    let mut previous: &[Rational] = &[];
    for (k, gens) in levels.iter().enumerate() {
        let level = (k + 1) as u16;
        for g in gens.iter().filter(|g| !previous.contains(g)) {
            let Some(w) = g.cleared(&l).and_then(|w| w.to_usize()) else {
                continue;
            };
            if w == 0 || w > top {
                continue;
            }
            for t in w..=top {
                if first_level[t].is_none() && first_level[t - w].is_some() {
                    first_level[t] = Some(level);
                }
            }
        }
        previous = gens;
    }
    let mut out: Vec<(usize, Rational)> = first_level
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(t, lv)| lv.map(|lv| (lv as usize, Rational::new(t as u64, l.clone()).expect("nonzero L"))))
        .collect();
    out.sort();
    Ok(out)
}

enum Check {
    Pass(CheckRecord),
    Excluded,
    Undecided,
}

/// Checks `n·x ∈ S + M` for every nonzero element `x ≤ x_bound` of the
/// depth-`depth` truncation, querying membership in the full monoid with
/// depth limit `depth`.
///
/// Elements are swept level by level, so a reported failure is the least
/// failing element among those first appearing at the shallowest failing level.
pub fn verify_finitary_certificate(
    spec: &PuiseuxSpec,
    n: u64,
    s: &[Rational],
    x_bound: &Rational,
    depth: usize,
) -> Result<CertificateOutcome> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if s.is_empty() {
        return domain("S must be nonempty");
    }
    if depth == 0 {
        return domain("depth must be at least 1");
    }
    let mut s_sorted = s.to_vec();
    s_sorted.sort();
    s_sorted.dedup();
    for elem in &s_sorted {
        if elem.is_zero() {
            return domain("S must consist of nonzero elements");
        }
        match spec.member(elem, depth)? {
            Membership::Yes(_) => {}
            Membership::No(_) => return domain(format!("{elem} ∈ S is not an element of the monoid")),
            Membership::Unknown { .. } => {
                return domain(format!(
                    "membership of {elem} ∈ S could not be confirmed at depth {depth}"
                ))
            }
        }
    }

    let elements = graded_elements(spec, x_bound, depth)?;
    let nq = Rational::from(n);
    let results: Vec<Result<Check>> = elements
        .par_iter()
        .map(|(_, x)| {
            let nx = &nq * x;
            let mut undecided = false;
            for cand in &s_sorted {
                let Some(rest) = nx.checked_sub(cand) else { continue };
                match spec.member(&rest, depth)? {
                    Membership::Yes(w) => {
                        return Ok(Check::Pass(CheckRecord {
                            x: x.clone(),
                            s: cand.clone(),
                            rest: w,
                        }))
                    }
                    Membership::No(_) => {}
                    Membership::Unknown { .. } => undecided = true,
                }
            }
            Ok(if undecided { Check::Undecided } else { Check::Excluded })
        })
        .collect();

    let scope = Scope {
        x_bound: x_bound.clone(),
        depth,
        elements_checked: elements.len(),
    };
    let mut checks = Vec::with_capacity(elements.len());
    for ((level, x), result) in elements.iter().zip(results) {
        match result? {
            Check::Pass(record) => checks.push(record),
            other => {
                return Ok(CertificateOutcome::Failed(FailureWitness {
                    n,
                    s: s_sorted,
                    x: x.clone(),
                    level: *level,
                    conclusive: matches!(other, Check::Excluded),
                    scope: Scope {
                        elements_checked: checks.len(),
                        ..scope
                    },
                }));
            }
        }
    }
    Ok(CertificateOutcome::Certified(FinitaryCertificate {
        n,
        s: s_sorted,
        scope,
        checks,
    }))
}

/// `n(r)·r^j - n(r) = (n(r) - d(r))·(r + r^2 + … + r^j)`, with the right side
/// as an explicit factorization in `M_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub j: u32,
    pub lhs: Rational,
    pub factorization: Factorization,
}

/// The certificate `(d(r), {n(r)})` for `M_r = ⟨r^n : n ≥ 1⟩` with `r > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McyclicCertificate {
    pub ratio: Rational,
    pub n: u64,
    pub s: Vec<Rational>,
    pub identities: Vec<IdentityCheck>,
}

impl Serialize for McyclicCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", "scopedCertificate")?;
        map.serialize_entry("ratio", &self.ratio)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("S", &self.s)?;
        map.serialize_entry("scope", &serde_json::json!({ "identitiesUpTo": self.identities.len() }))?;
        map.serialize_entry("identities", &self.identities)?;
        map.end()
    }
}

/// Builds `(n, S) = (d(r), {n(r)})` and checks the identity behind it for
/// `j = 1..=j_max`.
pub fn mcyclic_certificate(r: &Rational, j_max: u32) -> Result<McyclicCertificate> {
    if *r <= Rational::one() {
        return domain(format!("the M_r certificate needs r > 1, got {r}"));
    }
    let nr = r.numerator().clone();
    let dr = r.denominator().clone();
    let n = dr
        .to_u64()
        .ok_or_else(|| Error::TooLarge(format!("d({r}) does not fit in 64 bits")))?;
    let coefficient = (&nr - &dr)
        .to_u64()
        .ok_or_else(|| Error::TooLarge(format!("n({r}) - d({r}) does not fit in 64 bits")))?;
    let nr_q = Rational::from_integer(nr.clone());
    let mut identities = Vec::new();
    for j in 1..=j_max {
        let rj = r.pow(j as i64).expect("r > 0");
        let lhs = (&nr_q * &rj).checked_sub(&nr_q).expect("r^j ≥ 1");
        let factorization = Factorization::from_counts((1..=j).map(|i| (r.pow(i as i64).expect("r > 0"), coefficient)));
        if factorization.evaluate() != lhs {
            return domain(format!("identity fails at j = {j}"));
        }
        identities.push(IdentityCheck { j, lhs, factorization });
    }
    Ok(McyclicCertificate {
        ratio: r.clone(),
        n,
        s: vec![nr_q],
        identities,
    })
}

/// A validated construction with its growth-inequality report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuiltConstruction {
    pub spec: PuiseuxSpec,
    pub report: Vec<InequalityRow>,
}

/// Builds `⟨q^{f(n)} s / p^n⟩` and validates the growth inequality for
/// `n = 1..=depth`.
pub fn build_primary_construction(
    p: u64,
    q: u64,
    f: Polynomial,
    chain: Vec<NumericalMonoid>,
    depth: u64,
) -> Result<BuiltConstruction> {
    if depth == 0 {
        return domain("depth must be at least 1");
    }
    let c = Construction::new(p, q, f, chain)?;
    let report = c.validate(depth)?;
    Ok(BuiltConstruction {
        spec: PuiseuxSpec::PrimaryConstruction(c),
        report,
    })
}

/// Minimal generators of `M_D ∩ ℕ₀` for the depth-`depth` truncation `M_D`.
pub fn integer_part_generators(spec: &PuiseuxSpec, depth: usize) -> Result<Vec<u64>> {
    let truncation = FiniteMonoid::new(&spec.generators_up_to(depth)?)?;
    let l = truncation.common_denominator();
    let h = truncation
        .cleared_atoms()
        .iter()
        .fold(BigUint::from(0u32), |acc, w| acc.gcd(w));
    // gp(M ∩ ℕ₀) = gp(M) ∩ ℤ = (h / gcd(h, L))·ℤ
    let step = (&h / h.gcd(l))
        .to_u64()
        .ok_or_else(|| Error::TooLarge("integer points are too sparse to enumerate".into()))?;
    let mut gens: Vec<u64> = Vec::new();
    let mut current: Option<(NumericalMonoid, u64)> = None;
    const SCAN_LIMIT: u64 = 10_000_000;
    for k in 1..=SCAN_LIMIT {
        let y = step
            .checked_mul(k)
            .ok_or_else(|| Error::TooLarge("integer points overflow".into()))?;
        if let Some((monoid, scale)) = &current {
            if *scale == step {
                let frob = monoid.frobenius();
                if frob < 0 || k as i64 > frob {
                    return Ok(gens);
                }
            }
            if y % scale == 0 && monoid.contains(y / scale) {
                continue;
            }
        }
        if truncation.contains(&Rational::from(y)) {
            gens.push(y);
            current = Some(NumericalMonoid::from_generators(&gens)?);
        }
    }
    Err(Error::TooLarge(format!(
        "M ∩ ℕ₀ did not stabilize within {SCAN_LIMIT} multiples of {step}"
    )))
}

/// The pair `(p, A(M ∩ ℕ₀) ∪ q·A(S_1))`, with `M ∩ ℕ₀` computed on the
/// depth-`depth` truncation.
pub fn construction_certificate_pair(c: &Construction, depth: usize) -> Result<(u64, Vec<Rational>)> {
    let spec = PuiseuxSpec::PrimaryConstruction(c.clone());
    let mut s: Vec<Rational> = integer_part_generators(&spec, depth)?
        .into_iter()
        .map(Rational::from)
        .collect();
    s.extend(
        c.level_monoid(1)
            .generators()
            .iter()
            .map(|&a| Rational::from(c.q()) * Rational::from(a)),
    );
    s.sort();
    s.dedup();
    Ok((c.p(), s))
}

/// A scope-free disproof of `n·M• ⊆ S + M` for one candidate `(n, S)`.
///
/// With `D = d(a_j)` coprime to every other denominator, the `D`-adic part
/// of `n·a_j = s + Σ α_i a_i` forces `D | n - α_j`, while `0 ≤ α_j < n < D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValuationRefutation {
    pub candidate_n: u64,
    #[serde(rename = "candidateS")]
    pub candidate_s: Vec<Rational>,
    pub witness_atom: Rational,
    #[serde(serialize_with = "crate::ser_display")]
    pub witness_denominator: BigUint,
    /// 1-based position of the witness in the generator enumeration.
    pub witness_index: usize,
    /// Whether refuting this candidate refutes strong primality of the monoid:
    /// true for infinite families, where every candidate has a witness.
    pub refutes_monoid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefutationOutcome {
    Refuted(ValuationRefutation),
    /// The finite generator list has no atom with a large enough denominator.
    NotRefuted {
        n: u64,
        s: Vec<Rational>,
        scanned: usize,
    },
}

impl Serialize for RefutationOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RefutationOutcome::Refuted(r) => tagged(serializer, "theoremBackedRefutation", r),
            RefutationOutcome::NotRefuted { n, s, scanned } => tagged(
                serializer,
                "notRefuted",
                &serde_json::json!({ "candidateN": n, "candidateS": s, "scanned": scanned }),
            ),
        }
    }
}

/// Searches for the first generator `a_j` with `d(a_j) > max{n, max d(S)}`
/// whose denominator is coprime to every `d(s)`, certifying `n·a_j ∉ S + M`.
///
/// Accepts prime-denominator families and finite generator lists with
/// pairwise coprime denominators.
pub fn refute_strongly_primary(spec: &PuiseuxSpec, n: u64, s: &[Rational]) -> Result<RefutationOutcome> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if s.is_empty() {
        return domain("S must be nonempty");
    }
    if s.iter().any(Rational::is_zero) {
        return domain("S must consist of nonzero elements");
    }
    let bound = s
        .iter()
        .map(|x| x.denominator().clone())
        .max()
        .expect("S nonempty")
        .max(BigUint::from(n));
    let coprime_to_s = |d: &BigUint| s.iter().all(|x| x.denominator().gcd(d).is_one());
    let refutation = |atom: Rational, index: usize, refutes_monoid: bool| {
        let mut candidate_s = s.to_vec();
        candidate_s.sort();
        candidate_s.dedup();
        RefutationOutcome::Refuted(ValuationRefutation {
            candidate_n: n,
            candidate_s,
            witness_denominator: atom.denominator().clone(),
            witness_atom: atom,
            witness_index: index,
            refutes_monoid,
        })
    };
    match spec {
        PuiseuxSpec::PrimeReciprocal(family) => {
            for (i, p) in family.admissible_primes().enumerate() {
                let d = BigUint::from(p);
                if d > bound && coprime_to_s(&d) {
                    return Ok(refutation(family.generator(p), i + 1, true));
                }
            }
            unreachable!("there are infinitely many primes")
        }
        PuiseuxSpec::Finite(gens) => {
            let mut list: Vec<Rational> = Vec::new();
            for g in gens {
                if !list.contains(g) {
                    list.push(g.clone());
                }
            }
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    if !a.denominator().gcd(b.denominator()).is_one() {
                        return domain(format!(
                            "denominators of {a} and {b} are not coprime, so the valuation argument does not apply"
                        ));
                    }
                }
            }
            for (i, a) in list.iter().enumerate() {
                if a.denominator() > &bound && coprime_to_s(a.denominator()) {
                    return Ok(refutation(a.clone(), i + 1, false));
                }
            }
            Ok(RefutationOutcome::NotRefuted {
                n,
                s: s.to_vec(),
                scanned: list.len(),
            })
        }
        _ => domain("the valuation refutation needs a prime-denominator family or a finite list of generators"),
    }
}
