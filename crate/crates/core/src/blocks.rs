//! Zero-sum sequences over finite abelian groups and block monoids `B(G₀)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::factor::LengthSet;
use crate::numerical::NumericalMonoid;

/// Largest group order the enumerations accept.
pub const MAX_GROUP_ORDER: u64 = 1 << 16;

/// `ℤ_{n_1} × … × ℤ_{n_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
}

/// An element of a [`FiniteAbelianGroup`] as a vector of residues.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u32>);

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return domain("a group needs at least one cyclic factor");
        }
        if orders.contains(&0) {
            return domain("cyclic factors must have order at least 1");
        }
        let order = orders.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n as u64));
        match order {
            Some(o) if o <= MAX_GROUP_ORDER => Ok(FiniteAbelianGroup { orders }),
            _ => Err(Error::TooLarge(format!(
                "groups of order above {MAX_GROUP_ORDER} are not supported"
            ))),
        }
    }

    /// `ℤ_n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.orders.len() && g.0.iter().zip(&self.orders).all(|(&x, &n)| x < n)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            domain(format!("{g} is not an element of {self}"))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| ((x as u64 + y as u64) % n as u64) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect())
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.decode(i)).collect()
    }

    fn encode(&self, g: &GroupElement) -> usize {
        g.0.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&x, &n)| acc * n as usize + x as usize)
    }

    fn decode(&self, mut i: usize) -> GroupElement {
        let mut out = vec![0u32; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (i % n as usize) as u32;
            i /= n as usize;
        }
        GroupElement(out)
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            orders: Vec<u32>,
        }
        let repr = Repr::deserialize(deserializer)?;
        FiniteAbelianGroup::new(repr.orders).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            write!(f, "{x}")
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl From<u32> for GroupElement {
    fn from(x: u32) -> Self {
        GroupElement(vec![x])
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    /// Accepts `[1, 0]`, or a bare integer for cyclic groups.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(u32),
            Vector(Vec<u32>),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Scalar(x) => GroupElement(vec![x]),
            Repr::Vector(v) => GroupElement(v),
        })
    }
}

/// A finite multiset of group elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GSequence {
    counts: BTreeMap<GroupElement, u32>,
}

impl GSequence {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_elements(elements: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut s = Self::empty();
        for g in elements {
            *s.counts.entry(g).or_insert(0) += 1;
        }
        s
    }

    /// `v_g(X)`.
    pub fn count(&self, g: &GroupElement) -> u32 {
        self.counts.get(g).copied().unwrap_or(0)
    }

    /// `|X| = Σ v_g(X)`.
    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.counts.keys()
    }

    pub fn counts(&self) -> impl Iterator<Item = (&GroupElement, u32)> {
        self.counts.iter().map(|(g, &c)| (g, c))
    }

    /// The elements in ascending order, repeated by multiplicity.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.counts
            .iter()
            .flat_map(|(g, &c)| std::iter::repeat_n(g.clone(), c as usize))
            .collect()
    }

    /// Sequence product `X·Y`.
    pub fn concat(&self, other: &GSequence) -> GSequence {
        let mut out = self.clone();
        for (g, &c) in &other.counts {
            *out.counts.entry(g.clone()).or_insert(0) += c;
        }
        out
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(GroupElement::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct ElementCount {
    element: GroupElement,
    count: u32,
}

impl Serialize for GSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<ElementCount> = self
            .counts
            .iter()
            .map(|(g, &c)| ElementCount {
                element: g.clone(),
                count: c,
            })
            .collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GSequence {
    /// Accepts element-count arrays or plain element lists such as `[1, 1, 2]`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Item {
            Counted(ElementCount),
            Plain(GroupElement),
        }
        let mut s = GSequence::empty();
        for item in Vec::<Item>::deserialize(deserializer)? {
            let (g, c) = match item {
                Item::Counted(ec) => (ec.element, ec.count),
                Item::Plain(g) => (g, 1),
            };
            if c > 0 {
                *s.counts.entry(g).or_insert(0) += c;
            }
        }
        Ok(s)
    }
}

/// A sequence whose terms sum to zero in its group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ZeroSumSequence(GSequence);

impl ZeroSumSequence {
    pub fn new(group: &FiniteAbelianGroup, seq: GSequence) -> Result<Self> {
        if sigma(group, &seq)? != group.zero() {
            return domain(format!("{seq} does not sum to zero"));
        }
        Ok(ZeroSumSequence(seq))
    }

    pub fn sequence(&self) -> &GSequence {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ZeroSumSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `σ(X) = Σ v_g(X)·g`.
pub fn sigma(group: &FiniteAbelianGroup, seq: &GSequence) -> Result<GroupElement> {
    let mut total = vec![0u64; group.orders.len()];
    for (g, c) in seq.counts() {
        group.check(g)?;
        for ((t, &x), &n) in total.iter_mut().zip(&g.0).zip(&group.orders) {
            *t = (*t + x as u64 * c as u64) % n as u64;
        }
    }
    Ok(GroupElement(total.into_iter().map(|t| t as u32).collect()))
}

/// `X ∈ B(G₀)`: zero sum and support inside `G₀`.
pub fn is_block(group: &FiniteAbelianGroup, g0: &[GroupElement], seq: &GSequence) -> bool {
    seq.support().all(|g| g0.contains(g)) && sigma(group, seq).is_ok_and(|s| s == group.zero())
}

/// Sorted, deduplicated indices of `G₀`, validated against the group.
fn subset_indices(group: &FiniteAbelianGroup, g0: &[GroupElement]) -> Result<Vec<usize>> {
    if g0.is_empty() {
        return domain("G0 must be nonempty");
    }
    let mut idx = Vec::with_capacity(g0.len());
    for g in g0 {
        group.check(g)?;
        idx.push(group.encode(g));
    }
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

struct AtomSearch<'a> {
    group: &'a FiniteAbelianGroup,
    /// nonzero elements of G₀, ascending
    pool: Vec<usize>,
    in_g0: Vec<bool>,
}

impl AtomSearch<'_> {
    fn add(&self, a: usize, b: usize) -> usize {
        let g = self.group.add(&self.group.decode(a), &self.group.decode(b));
        self.group.encode(&g)
    }

    fn neg(&self, a: usize) -> usize {
        self.group.encode(&self.group.neg(&self.group.decode(a)))
    }

    /// Extends the zero-sum free sequence `b` (with subsequence sums `sums`
    /// and total `total`) by pool entries from `from` on, collecting every
    /// minimal zero-sum sequence `b·h` whose largest term `h` closes it.
    fn extend(&self, b: &mut Vec<usize>, sums: &[bool], total: usize, from: usize, out: &mut Vec<Vec<usize>>) {
        let last = *b.last().expect("nonempty");
        let h = self.neg(total);
        if self.in_g0[h] && h >= last {
            let mut atom = b.clone();
            atom.push(h);
            out.push(atom);
        }
        for k in from..self.pool.len() {
            let g = self.pool[k];
            let mut next = sums.to_vec();
            next[g] = true;
            for (s, &present) in sums.iter().enumerate() {
                if present {
                    next[self.add(s, g)] = true;
                }
            }
            if next[0] {
                continue;
            }
            b.push(g);
            self.extend(b, &next, self.add(total, g), k, out);
            b.pop();
        }
    }
}

/// Atoms of `B(G₀)`: the minimal zero-sum sequences over `G₀`, ordered by
/// length and then lexicographically.
///
/// Each atom `A` is generated once as `B·h`, where `h` is its largest term
/// and `B = A·h⁻¹` is zero-sum free.
pub fn block_atoms(group: &FiniteAbelianGroup, g0: &[GroupElement]) -> Result<Vec<ZeroSumSequence>> {
    let idx = subset_indices(group, g0)?;
    let order = group.order();
    let mut in_g0 = vec![false; order];
    for &i in &idx {
        in_g0[i] = true;
    }
    let search = AtomSearch {
        group,
        pool: idx.iter().copied().filter(|&i| i != 0).collect(),
        in_g0,
    };
    let mut raw: Vec<Vec<usize>> = (0..search.pool.len())
        .into_par_iter()
        .map(|k| {
            let g = search.pool[k];
            let mut sums = vec![false; order];
            sums[g] = true;
            let mut out = Vec::new();
            search.extend(&mut vec![g], &sums, g, k, &mut out);
            out
        })
        .flatten()
        .collect();
    if search.in_g0[0] {
        raw.push(vec![0]);
    }
    let mut atoms: Vec<ZeroSumSequence> = raw
        .into_iter()
        .map(|a| ZeroSumSequence(GSequence::from_elements(a.into_iter().map(|i| group.decode(i)))))
        .collect();
    atoms.sort_by_key(|a| (a.len(), a.0.elements()));
    Ok(atoms)
}

/// `D(G)`, the largest length of a minimal zero-sum sequence over `G`.
pub fn davenport(group: &FiniteAbelianGroup) -> usize {
    block_atoms(group, &group.elements())
        .expect("G is a valid subset of itself")
        .iter()
        .map(ZeroSumSequence::len)
        .max()
        .unwrap_or(1)
}

/// All factorizations of the block `X` into atoms of `B(G₀)`, each as a
/// sorted list of atoms.
pub fn block_factorizations(
    group: &FiniteAbelianGroup,
    g0: &[GroupElement],
    x: &GSequence,
) -> Result<Vec<Vec<ZeroSumSequence>>> {
    subset_indices(group, g0)?;
    for g in x.support() {
        group.check(g)?;
    }
    if !is_block(group, g0, x) {
        return domain(format!("{x} is not a block over G0"));
    }
    if x.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let support: Vec<GroupElement> = x.support().cloned().collect();
    let atoms = block_atoms(group, &support)?;
    let position: HashMap<&GroupElement, usize> = support.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let vectors: Vec<Vec<u32>> = atoms
        .iter()
        .map(|a| {
            let mut v = vec![0u32; support.len()];
            for (g, c) in a.0.counts() {
                v[position[g]] = c;
            }
            v
        })
        .collect();
    let target: Vec<u32> = support.iter().map(|g| x.count(g)).collect();

    let mut memo: HashMap<Vec<u32>, BTreeSet<Vec<usize>>> = HashMap::new();
    let found = decompose(&target, &vectors, &mut memo);
    Ok(found
        .iter()
        .map(|combo| combo.iter().map(|&i| atoms[i].clone()).collect())
        .collect())
}

/// Multisets of atom indices summing to `rest`; the atom covering the first
/// nonzero coordinate is chosen at each step.
fn decompose(
    rest: &[u32],
    atoms: &[Vec<u32>],
    memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<usize>>>,
) -> BTreeSet<Vec<usize>> {
    let Some(first) = rest.iter().position(|&c| c > 0) else {
        return BTreeSet::from([Vec::new()]);
    };
    if let Some(hit) = memo.get(rest) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    for (i, a) in atoms.iter().enumerate() {
        if a[first] == 0 || a.iter().zip(rest).any(|(&x, &r)| x > r) {
            continue;
        }
        let next: Vec<u32> = rest.iter().zip(a).map(|(&r, &x)| r - x).collect();
        for mut combo in decompose(&next, atoms, memo) {
            let at = combo.partition_point(|&j| j < i);
            combo.insert(at, i);
            out.insert(combo);
        }
    }
    memo.insert(rest.to_vec(), out.clone());
    out
}

/// `L(X)` in `B(G₀)`.
pub fn block_length_set(group: &FiniteAbelianGroup, g0: &[GroupElement], x: &GSequence) -> Result<LengthSet> {
    Ok(block_factorizations(group, g0, x)?
        .iter()
        .map(|f| f.len() as u64)
        .collect())
}

/// The least `m` with `a_{m+1} ∈ ⟨a_1, …, a_m⟩`.
///
/// Terms are pulled one at a time. Each prefix is divided by its gcd and
/// tested with numerical-monoid membership, so a term not divisible by the
/// prefix gcd is rejected at once. Fails with [`Error::ScanCap`] if `m` would
/// exceed `cap`.
pub fn gcd_stabilization(seq: impl IntoIterator<Item = u64>, cap: usize) -> Result<usize> {
    let mut terms = seq.into_iter();
    let mut prefix: Vec<u64> = Vec::new();
    let mut pull = |prefix_len: usize| -> Result<u64> {
        match terms.next() {
            Some(0) => domain("sequence terms must be positive"),
            Some(t) => Ok(t),
            None => domain(format!(
                "the sequence ended after {prefix_len} terms without stabilizing"
            )),
        }
    };
    prefix.push(pull(0)?);
    let mut monoid = NumericalMonoid::from_generators(&prefix)?;
    loop {
        let m = prefix.len();
        if m > cap {
            return Err(Error::ScanCap { cap });
        }
        let next = pull(m)?;
        let (generated, scale) = &monoid;
        if next % scale == 0 && generated.contains(next / scale) {
            return Ok(m);
        }
        prefix.push(next);
        monoid = NumericalMonoid::from_generators(&prefix)?;
    }
}
