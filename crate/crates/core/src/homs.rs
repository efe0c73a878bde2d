//! Homomorphisms between Puiseux monoids.
//!
//! Every homomorphism `M → N` of Puiseux monoids is multiplication by some
//! `q ∈ ℚ≥0`, and it is a transfer homomorphism exactly when it is onto.
//! So checking a homomorphism amounts to checking `q·g ∈ N` on generators.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{int_valuation, prime_factors, Rational};
use crate::error::{domain, Result};
use crate::factor::{length_set, LengthSet};
use crate::puiseux::{
    FiniteMonoid, GeometricStart, Membership, PrimeFilter, PrimeReciprocal, PuiseuxSpec, ReciprocalForm,
};

/// `x ↦ q·x` from `domain` to `codomain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpec {
    pub q: Rational,
    pub domain: PuiseuxSpec,
    pub codomain: PuiseuxSpec,
}

/// Outcome of [`check_hom`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomCheck {
    /// Every generator maps into the codomain.
    Valid,
    /// The first `depth` generators of an infinite family map into the codomain.
    ValidAtDepth { depth: usize },
    /// `q·witness` lies outside the codomain.
    Invalid { witness: Rational },
    /// Membership of `q·generator` could not be decided at `depth`.
    Inconclusive { generator: Rational, depth: usize },
}

impl HomCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, HomCheck::Valid | HomCheck::ValidAtDepth { .. })
    }
}

impl Serialize for HomCheck {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            HomCheck::Valid => map.serialize_entry("verdict", "valid")?,
            HomCheck::ValidAtDepth { depth } => {
                map.serialize_entry("verdict", "validAtDepth")?;
                map.serialize_entry("depth", depth)?;
            }
            HomCheck::Invalid { witness } => {
                map.serialize_entry("verdict", "invalid")?;
                map.serialize_entry("witness", witness)?;
            }
            HomCheck::Inconclusive { generator, depth } => {
                map.serialize_entry("verdict", "inconclusive")?;
                map.serialize_entry("generator", generator)?;
                map.serialize_entry("depth", depth)?;
            }
        }
        map.end()
    }
}

/// Checks that `x ↦ q·x` maps `domain` into `codomain`.
///
/// Finite domains are checked on every generator; families on their first
/// `depth` generators.
pub fn check_hom(q: &Rational, domain_spec: &PuiseuxSpec, codomain: &PuiseuxSpec, depth: usize) -> Result<HomCheck> {
    if q.is_zero() {
        return Ok(HomCheck::Valid);
    }
    let gens = domain_spec.generators_up_to(depth.max(1))?;
    for g in gens {
        match codomain.member(&(q * &g), depth)? {
            Membership::Yes(_) => {}
            Membership::No(_) => return Ok(HomCheck::Invalid { witness: g }),
            Membership::Unknown { depth_searched } => {
                return Ok(HomCheck::Inconclusive {
                    generator: g,
                    depth: depth_searched,
                })
            }
        }
    }
    Ok(if domain_spec.is_finite() {
        HomCheck::Valid
    } else {
        HomCheck::ValidAtDepth { depth }
    })
}

/// The only multiplier a homomorphism with these generator images can have.
///
/// A homomorphism on `⟨g_1, …, g_k⟩` satisfies `n_i·φ(g_j)·d_j = n_j·φ(g_i)·d_i`
/// after clearing, so all ratios `φ(g_i)/g_i` agree; `None` when they do not.
pub fn multiplier_from_images(gens: &[Rational], images: &[Rational]) -> Option<Rational> {
    if gens.len() != images.len() || gens.is_empty() || gens.iter().any(Rational::is_zero) {
        return None;
    }
    let q = images[0].checked_div(&gens[0])?;
    gens.iter().zip(images).all(|(g, img)| &(&q * g) == img).then_some(q)
}

/// Whether `x ↦ q·x` is a transfer homomorphism, i.e. onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferCheck {
    pub transfer: bool,
    /// A generator of the codomain outside `q·M` when the map is not onto.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Rational>,
    pub evidence: String,
}

/// Decides `q·M = N`.
///
/// Exact for two finite specs (each atom `h` of `N` must satisfy `h/q ∈ M`)
/// and for a bi-infinite geometric monoid mapped to itself, where `q·M = M`
/// holds exactly for the powers of `r`.
pub fn is_transfer(q: &Rational, m: &PuiseuxSpec, n: &PuiseuxSpec) -> Result<TransferCheck> {
    if q.is_zero() {
        let witness = n.generators_up_to(1)?.into_iter().next();
        return Ok(TransferCheck {
            transfer: false,
            witness,
            evidence: "multiplication by 0 sends every element to 0, so the preimage of 0 is not {0}".into(),
        });
    }
    match (m, n) {
        (PuiseuxSpec::Finite(_), PuiseuxSpec::Finite(n_gens)) => {
            if !check_hom(q, m, n, 1)?.is_valid() {
                return domain(format!("multiplication by {q} does not map {m} into {n}"));
            }
            let target = FiniteMonoid::new(n_gens)?;
            let source = match m {
                PuiseuxSpec::Finite(gens) => FiniteMonoid::new(gens)?,
                _ => unreachable!(),
            };
            let qinv = q.recip().expect("q > 0");
            for h in target.atoms() {
                if !source.contains(&(h * &qinv)) {
                    return Ok(TransferCheck {
                        transfer: false,
                        witness: Some(h.clone()),
                        evidence: format!("{h} is not in the image, since {} is not in the domain", h * &qinv),
                    });
                }
            }
            Ok(TransferCheck {
                transfer: true,
                witness: None,
                evidence: "onto: every atom of the codomain is q times an element of the domain".into(),
            })
        }
        (PuiseuxSpec::Geometric(a), PuiseuxSpec::Geometric(b))
            if a == b && a.start() == GeometricStart::BiInfinite && a.has_power_atoms() =>
        {
            Ok(match power_fingerprint(a.ratio(), q) {
                Some(k) => TransferCheck {
                    transfer: true,
                    witness: None,
                    evidence: format!("q = r^{k} shifts the atoms r^n to r^(n+{k}), an automorphism"),
                },
                None => TransferCheck {
                    transfer: false,
                    witness: None,
                    evidence: "q is not an integer power of r, so q·M is not M".into(),
                },
            })
        }
        _ => domain("transfer checks are exact only for finite specs or a bi-infinite geometric monoid onto itself"),
    }
}

/// One checked sample of [`verify_transfer_properties`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferRecord {
    pub x: Rational,
    pub image: Rational,
    pub atom_in_domain: bool,
    pub atom_in_codomain: bool,
    pub lengths_domain: LengthSet,
    pub lengths_codomain: LengthSet,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedSample {
    pub x: Rational,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub all_hold: bool,
    pub records: Vec<TransferRecord>,
    pub skipped: Vec<SkippedSample>,
}

/// For each sample `x ∈ M`, compares atomicity of `x` and `q·x` and the sets
/// of lengths `L_M(x)` and `L_N(q·x)`.
pub fn verify_transfer_properties(
    q: &Rational,
    m: &PuiseuxSpec,
    n: &PuiseuxSpec,
    samples: &[Rational],
) -> Result<TransferReport> {
    let (PuiseuxSpec::Finite(m_gens), PuiseuxSpec::Finite(n_gens)) = (m, n) else {
        return domain("transfer properties are verified on finite specs only");
    };
    if !is_transfer(q, m, n)?.transfer {
        return domain(format!(
            "multiplication by {q} is not a transfer homomorphism from {m} onto {n}"
        ));
    }
    let source = FiniteMonoid::new(m_gens)?;
    let target = FiniteMonoid::new(n_gens)?;
    let outcomes: Vec<Result<std::result::Result<TransferRecord, SkippedSample>>> = samples
        .par_iter()
        .map(|x| {
            if !source.contains(x) {
                return Ok(Err(SkippedSample {
                    x: x.clone(),
                    note: "not an element of the domain".into(),
                }));
            }
            let image = q * x;
            let atom_in_domain = source.is_atom(x);
            let atom_in_codomain = target.is_atom(&image);
            let lengths_domain = length_set(&source, x)?;
            let lengths_codomain = length_set(&target, &image)?;
            let holds = atom_in_domain == atom_in_codomain && lengths_domain == lengths_codomain;
            Ok(Ok(TransferRecord {
                x: x.clone(),
                image,
                atom_in_domain,
                atom_in_codomain,
                lengths_domain,
                lengths_codomain,
                holds,
            }))
        })
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome? {
            Ok(r) => records.push(r),
            Err(s) => skipped.push(s),
        }
    }
    Ok(TransferReport {
        all_hold: records.iter().all(|r| r.holds),
        records,
        skipped,
    })
}

/// The exponent `k` with `s = r^k`, read off from `p`-adic valuations at the
/// primes of `n(r)·d(r)` and then confirmed exactly.
///
/// Every power of `r` has `v_p(r^k) = k·v_p(r)`, so a single prime fixes the
/// only possible `k`.
pub fn power_fingerprint(r: &Rational, s: &Rational) -> Option<i64> {
    if s.is_zero() || r.is_zero() {
        return None;
    }
    if r.is_integer() && r.numerator().is_one() {
        return s.is_integer().then_some(0).filter(|_| s.numerator().is_one());
    }
    let primes = prime_factors(&(r.numerator() * r.denominator()), 1 << 20)?;
    let p = *primes.first()?;
    let vr = int_valuation(p, r.numerator()) - int_valuation(p, r.denominator());
    let vs = int_valuation(p, s.numerator()) - int_valuation(p, s.denominator());
    if vr == 0 || vs % vr != 0 {
        return None;
    }
    let k = vs / vr;
    (r.pow(k)? == *s).then_some(k)
}

/// Multipliers found by [`automorphism_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutomorphismWindow {
    pub ratio: Rational,
    pub window: u32,
    /// `(k, r^k)` for each surviving multiplier, by `k`.
    pub multipliers: Vec<(i64, Rational)>,
    pub candidates_examined: usize,
    pub rejected: usize,
    /// Bound on numerators and denominators of the non-power candidates.
    pub candidate_bound: u64,
}

/// Cap on the numerator/denominator bound of the candidate grid.
pub const CANDIDATE_BOUND_CAP: u64 = 512;

/// Searches the multipliers `q` with `q·A = A` for `A = {r^n : n ∈ ℤ}`,
/// among the powers `r^k` with `|k| ≤ K` and all `a/b` with `a, b` up to the
/// largest numerator or denominator in the window.
pub fn automorphism_search(spec: &PuiseuxSpec, window: u32) -> Result<AutomorphismWindow> {
    let PuiseuxSpec::Geometric(g) = spec else {
        return domain("automorphism search needs a bi-infinite geometric spec");
    };
    if g.start() != GeometricStart::BiInfinite {
        return domain("automorphism search needs a bi-infinite geometric spec");
    }
    if !g.has_power_atoms() {
        return domain(format!(
            "the powers of {} are atoms only when n(r) > 1 and d(r) > 1",
            g.ratio()
        ));
    }
    if window == 0 {
        return domain("the window must be at least 1");
    }
    let r = g.ratio();
    let k_max = window as i64;
    let largest = r.numerator().max(r.denominator()).clone();
    let bound = num_traits::ToPrimitive::to_u64(&largest.pow(window))
        .unwrap_or(u64::MAX)
        .min(CANDIDATE_BOUND_CAP);

    let mut candidates: BTreeSet<Rational> = (-k_max..=k_max).map(|k| r.pow(k).expect("r > 0")).collect();
    for a in 1..=bound {
        for b in 1..=bound {
            candidates.insert(Rational::new(a, b).expect("b > 0"));
        }
    }
    let candidates: Vec<Rational> = candidates.into_iter().collect();

    let verdicts: Vec<Result<Option<(i64, Rational)>>> = candidates
        .par_iter()
        .map(|s| {
            let Some(k) = power_fingerprint(r, s) else {
                return Ok(None);
            };
            if k.abs() > k_max {
                return Ok(None);
            }
            let reach = spec.generators_up_to((k_max + k.abs()) as usize)?;
            for i in -k_max..=k_max {
                let image = s * &r.pow(i).expect("r > 0");
                if !reach.contains(&image) {
                    return domain(format!("{s}·r^{i} = {image} escaped the truncation"));
                }
            }
            Ok(Some((k, s.clone())))
        })
        .collect();
    let mut multipliers = Vec::new();
    let mut rejected = 0;
    for v in verdicts {
        match v? {
            Some(m) => multipliers.push(m),
            None => rejected += 1,
        }
    }
    multipliers.sort();
    Ok(AutomorphismWindow {
        ratio: r.clone(),
        window,
        candidates_examined: candidates.len(),
        rejected,
        multipliers,
        candidate_bound: bound,
    })
}

/// `θ(x) = n(x) mod 2`, with `θ(0) = 0`.
pub fn parity(x: &Rational) -> u8 {
    if x.numerator().bit(0) {
        1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParitySample {
    pub x: Rational,
    pub y: Rational,
    pub theta_x: u8,
    pub theta_y: u8,
    pub theta_sum: u8,
    pub holds: bool,
}

/// The parity map `θ: ⟨1/p : p odd prime⟩ → ℤ₂` checked on sample pairs.
///
/// Reducing a sum of fractions with odd denominators only divides by odd
/// numbers, so numerator parity is additive. `θ(2/3) = 0` shows that the
/// kernel is larger than `{0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParityFixture {
    pub monoid: PuiseuxSpec,
    pub samples: Vec<ParitySample>,
    pub homomorphism_holds: bool,
    /// Preimages of `0` and `1`.
    pub surjectivity: [(Rational, u8); 2],
    pub kernel_witness: Rational,
    pub kernel_witness_image: u8,
}

pub fn parity_hom_fixture() -> ParityFixture {
    let family = PrimeReciprocal::new(ReciprocalForm::Reciprocal, PrimeFilter::Odd);
    let atoms = family.generators(5);
    // all sums of at most two of the first five atoms
    let mut elements: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
    for (i, a) in atoms.iter().enumerate() {
        elements.insert(a.clone());
        for b in &atoms[i..] {
            elements.insert(a + b);
        }
    }
    let mut samples = Vec::new();
    for x in &elements {
        for y in &elements {
            let (tx, ty, ts) = (parity(x), parity(y), parity(&(x + y)));
            samples.push(ParitySample {
                x: x.clone(),
                y: y.clone(),
                theta_x: tx,
                theta_y: ty,
                theta_sum: ts,
                holds: ts == (tx + ty) % 2,
            });
        }
    }
    let kernel_witness = Rational::new(2u32, 3u32).expect("nonzero");
    ParityFixture {
        monoid: PuiseuxSpec::PrimeReciprocal(family),
        homomorphism_holds: samples.iter().all(|s| s.holds),
        samples,
        surjectivity: [(Rational::zero(), 0), (atoms[0].clone(), parity(&atoms[0]))],
        kernel_witness_image: parity(&kernel_witness),
        kernel_witness,
    }
}
