//! Concrete matroid oracles: uniform, partition, graphic, intersections of
//! matroids, the hidden-partition adversary, and the contraction/truncation
//! wrappers the algorithms build on.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::core::{
    batch_independent, Element, ElementSet, Error, MatroidOracle, QueryLedger, Result,
};

/// Independence iff `|S| <= k`.
#[derive(Debug, Clone)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty ground set".into()));
        }
        Ok(Self { n, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl MatroidOracle for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.k
    }

    fn native_rank(&self, set: &ElementSet) -> Option<usize> {
        Some(set.len().min(self.k))
    }
}

/// Independence iff every part holds at most its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    part_of: Vec<usize>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(part_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if part_of.is_empty() {
            return Err(Error::InvalidParameter("empty ground set".into()));
        }
        if let Some(&bad) = part_of.iter().find(|&&p| p >= capacities.len()) {
            return Err(Error::InvalidParameter(format!(
                "part id {bad} has no declared capacity"
            )));
        }
        Ok(Self { part_of, capacities })
    }

    pub fn parts(&self) -> usize {
        self.capacities.len()
    }

    pub fn part_of(&self) -> &[usize] {
        &self.part_of
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    fn part_counts(&self, set: &ElementSet) -> Vec<usize> {
        let mut counts = vec![0usize; self.capacities.len()];
        for e in set {
            counts[self.part_of[e]] += 1;
        }
        counts
    }
}

impl MatroidOracle for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut counts = vec![0usize; self.capacities.len()];
        for e in set {
            let p = self.part_of[e];
            counts[p] += 1;
            if counts[p] > self.capacities[p] {
                return false;
            }
        }
        true
    }

    fn native_rank(&self, set: &ElementSet) -> Option<usize> {
        Some(
            self.part_counts(set)
                .iter()
                .zip(&self.capacities)
                .map(|(&c, &cap)| c.min(cap))
                .sum(),
        )
    }
}

/// Ground-set elements are edges of a fixed multigraph; a set is independent
/// iff its edges are acyclic. The union-find is rebuilt per query, which
/// keeps the oracle pure at the cost of a log factor nobody notices at this
/// scale.
#[derive(Debug, Clone)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidParameter("empty ground set".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidParameter(format!(
                "edge ({u},{v}) out of range for {vertices} vertices"
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges of `set` that join previously disconnected components,
    /// i.e. the rank of the edge set.
    fn forest_size(&self, set: &ElementSet) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        let mut joined = 0;
        for e in set {
            let (u, v) = self.edges[e];
            if uf.union(u, v) {
                joined += 1;
            }
        }
        joined
    }
}

impl MatroidOracle for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.forest_size(set) == set.len()
    }

    fn native_rank(&self, set: &ElementSet) -> Option<usize> {
        Some(self.forest_size(set))
    }
}

/// Disjoint-set forest with path halving and union by rank.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grandparent = self.parent[self.parent[x] as usize];
            self.parent[x] = grandparent;
            x = grandparent as usize;
        }
        x
    }

    /// Returns `true` when the two roots were distinct (no cycle closed).
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }
}

/// Intersection of several matroids: feasible iff independent in every
/// member. Downward closed, but not a matroid in general, so no native rank
/// and no augmentation guarantee.
pub struct IntersectionConstraint {
    members: Vec<Box<dyn MatroidOracle>>,
}

impl IntersectionConstraint {
    pub fn new(members: Vec<Box<dyn MatroidOracle>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter(
                "intersection needs at least one matroid".into(),
            ));
        }
        let n = members[0].ground_size();
        if members.iter().any(|m| m.ground_size() != n) {
            return Err(Error::InvalidParameter(
                "all intersected matroids must share the ground set".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn arity(&self) -> usize {
        self.members.len()
    }
}

impl MatroidOracle for IntersectionConstraint {
    fn ground_size(&self) -> usize {
        self.members[0].ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.members.iter().all(|m| m.is_independent(set))
    }

    fn is_single_matroid(&self) -> bool {
        self.members.len() == 1
    }
}

/// A partition matroid whose parts are a secret random equipartition.
///
/// Behaves exactly like the explicit [`PartitionMatroid`] it hides, but the
/// partition is not exposed through any interface other than independence
/// queries — in particular there is no native rank. [`Self::unveil`] exists
/// for tests and diagnostics only.
pub struct HiddenPartitionInstance {
    hidden: PartitionMatroid,
    parts: usize,
    slope: usize,
    seed: u64,
}

impl HiddenPartitionInstance {
    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn slope(&self) -> usize {
        self.slope
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The equivalent explicit partition matroid. Diagnostic only: using it
    /// defeats the purpose of the instance.
    pub fn unveil(&self) -> PartitionMatroid {
        self.hidden.clone()
    }

    /// Shape that makes independence-only access expensive at desk scale:
    /// about `n^{1/3}` equal parts (nearest divisor of `n`), capacities
    /// growing linearly so that the largest part's capacity just reaches its
    /// size. An algorithm must discover part boundaries through feasibility
    /// probes alone, one capacity tier at a time.
    pub fn hardness_preset(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("preset needs n >= 2".into()));
        }
        let nf = n as f64;
        let p = nearest_divisor(n, nf.cbrt().max(2.0));
        let slope = ((nf / (p * p) as f64).round() as usize).max(1);
        make_hidden_partition(n, p, slope, seed)
    }
}

fn nearest_divisor(n: usize, target: f64) -> usize {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .min_by(|&a, &b| {
            let da = (a as f64 - target).abs();
            let db = (b as f64 - target).abs();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap_or(1)
}

/// Builds a hidden partition instance: a uniformly random equipartition of
/// `0..n` into `p` parts, where part `i` (1-indexed) has capacity `i * slope`.
pub fn make_hidden_partition(
    n: usize,
    p: usize,
    slope: usize,
    seed: u64,
) -> Result<HiddenPartitionInstance> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidParameter("n and p must be positive".into()));
    }
    if !n.is_multiple_of(p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} does not divide n = {n}"
        )));
    }
    if slope == 0 {
        return Err(Error::InvalidParameter("slope must be >= 1".into()));
    }
    let part_size = n / p;
    let mut order: Vec<Element> = (0..n).collect();
    let mut rng: ChaCha8Rng = crate::core::rng::run_rng(seed);
    order.shuffle(&mut rng);
    let mut part_of = vec![0usize; n];
    for (i, &e) in order.iter().enumerate() {
        part_of[e] = i / part_size;
    }
    let capacities: Vec<usize> = (1..=p).map(|i| i * slope).collect();
    Ok(HiddenPartitionInstance {
        hidden: PartitionMatroid::new(part_of, capacities)?,
        parts: p,
        slope,
        seed,
    })
}

impl MatroidOracle for HiddenPartitionInstance {
    fn ground_size(&self) -> usize {
        self.hidden.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.hidden.is_independent(set)
    }
}

/// The matroid `M(S, X) = { T ⊆ X : S ∪ T ∈ M }`: `M` contracted by the
/// current solution `S` and restricted to the surviving universe `X`.
pub struct ContractedMatroid<'a> {
    base: &'a dyn MatroidOracle,
    anchor: ElementSet,
    universe: ElementSet,
    anchor_rank: OnceLock<usize>,
}

impl<'a> ContractedMatroid<'a> {
    pub fn new(base: &'a dyn MatroidOracle, anchor: ElementSet, universe: ElementSet) -> Self {
        Self {
            base,
            anchor,
            universe,
            anchor_rank: OnceLock::new(),
        }
    }

    pub fn universe(&self) -> &ElementSet {
        &self.universe
    }

    pub fn anchor(&self) -> &ElementSet {
        &self.anchor
    }

    /// Rank of the anchor in the base matroid; one base rank query, cached.
    fn anchor_rank(&self) -> Option<usize> {
        if !self.base.has_native_rank() {
            return None;
        }
        Some(*self.anchor_rank.get_or_init(|| {
            self.base
                .native_rank(&self.anchor)
                .expect("native rank present")
        }))
    }
}

impl MatroidOracle for ContractedMatroid<'_> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.is_subset_of(&self.universe) && self.base.is_independent(&self.anchor.union(set))
    }

    fn native_rank(&self, set: &ElementSet) -> Option<usize> {
        let anchor_rank = self.anchor_rank()?;
        let within = set.intersection(&self.universe);
        let joint = self
            .base
            .native_rank(&self.anchor.union(&within))
            .expect("native rank present");
        Some(joint - anchor_rank)
    }
}

/// Truncation of a matroid at rank `limit`; still a matroid.
pub struct TruncatedMatroid<'a> {
    base: &'a dyn MatroidOracle,
    limit: usize,
}

impl<'a> TruncatedMatroid<'a> {
    pub fn new(base: &'a dyn MatroidOracle, limit: usize) -> Self {
        Self { base, limit }
    }
}

impl MatroidOracle for TruncatedMatroid<'_> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.limit && self.base.is_independent(set)
    }

    fn native_rank(&self, set: &ElementSet) -> Option<usize> {
        self.base.native_rank(set).map(|r| r.min(self.limit))
    }

    fn is_single_matroid(&self) -> bool {
        self.base.is_single_matroid()
    }
}

/// Checked single independence query.
pub fn is_independent(m: &dyn MatroidOracle, set: &ElementSet) -> Result<bool> {
    if let Some(e) = set.max_element() {
        if e >= m.ground_size() {
            return Err(Error::ElementOutOfRange {
                element: e,
                n: m.ground_size(),
            });
        }
    }
    Ok(m.is_independent(set))
}

/// Rank of `set`: the size of its largest independent subset.
///
/// Uses the native rank oracle when present (one step, one query). Otherwise
/// falls back to a greedy left-to-right scan of `|set|` independence queries
/// in `|set|` sequential steps, and flags the ledger, since the fallback
/// quietly costs what a parallel algorithm is trying to save.
pub fn rank(m: &dyn MatroidOracle, set: &ElementSet, ledger: &mut QueryLedger) -> usize {
    if let Some(r) = m.native_rank(set) {
        ledger.charge_m_step(1);
        return r;
    }
    ledger.rank_fallback_used = true;
    let mut kept = ElementSet::empty();
    for e in set {
        let candidate = kept.with(e);
        let ok = batch_independent(m, std::slice::from_ref(&candidate), ledger).expect("nonempty batch");
        if ok[0] {
            kept = candidate;
        }
    }
    kept.len()
}

/// Rank without ledger accounting, for diagnostics and tests.
pub fn rank_uncounted(m: &dyn MatroidOracle, set: &ElementSet) -> usize {
    if let Some(r) = m.native_rank(set) {
        return r;
    }
    let mut kept = ElementSet::empty();
    for e in set {
        let candidate = kept.with(e);
        if m.is_independent(&candidate) {
            kept = candidate;
        }
    }
    kept.len()
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// All subsets of `0..n` in mask order; desk-scale only.
    pub fn subsets(n: usize) -> impl Iterator<Item = ElementSet> {
        assert!(n <= 20);
        (0u32..(1 << n)).map(move |mask| {
            ElementSet::from_sorted_unchecked(
                (0..n).filter(|&i| mask & (1 << i) != 0).collect(),
            )
        })
    }

    /// Exhaustive downward-closure check.
    pub fn assert_downward_closed(m: &dyn MatroidOracle) {
        let n = m.ground_size();
        for s in subsets(n) {
            if !m.is_independent(&s) {
                continue;
            }
            for e in &s {
                assert!(
                    m.is_independent(&s.without(e)),
                    "downward closure fails at {s:?} minus {e}"
                );
            }
        }
    }

    /// Exhaustive augmentation check over all independent pairs.
    pub fn assert_augmentation(m: &dyn MatroidOracle) {
        let n = m.ground_size();
        let independent: Vec<ElementSet> =
            subsets(n).filter(|s| m.is_independent(s)).collect();
        for small in &independent {
            for large in &independent {
                if small.len() >= large.len() {
                    continue;
                }
                let found = large
                    .difference(small)
                    .iter()
                    .any(|e| m.is_independent(&small.with(e)));
                assert!(
                    found,
                    "augmentation fails for {small:?} against {large:?}"
                );
            }
        }
    }

    /// Rank by brute force: the largest independent subset.
    pub fn exhaustive_rank(m: &dyn MatroidOracle, set: &ElementSet) -> usize {
        assert!(set.len() <= 20);
        let members = set.to_vec();
        let mut best = 0;
        for mask in 0u32..(1 << members.len()) {
            let sub = ElementSet::from_elements(
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect(),
            );
            if m.is_independent(&sub) {
                best = best.max(sub.len());
            }
        }
        best
    }
}
