//! Ground-set and oracle abstractions, plus the instrumentation contract that
//! makes "adaptive rounds" and "steps of matroid queries" measurable.
//!
//! Every function evaluation and matroid query an algorithm makes goes through
//! [`batch_eval`], [`batch_independent`] or [`batch_rank`]. One call is one
//! round/step: the queries inside a batch are fixed before the call and none
//! of them may depend on another's result. The [`QueryLedger`] accumulates the
//! counts; algorithms never touch the counters directly.

use std::sync::atomic::{AtomicU64, Ordering};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Index of a ground-set element. Elements are dense indices `0..n`.
pub type Element = usize;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("a batch must contain at least one query")]
    EmptyBatch,
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: Element, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coordinate of element {element} would exceed 1 after a step of {lambda}")]
    CoordinateOverflow { element: Element, lambda: f64 },
    #[error("this operation requires a native rank oracle")]
    RankOracleRequired,
    #[error("ground set of size {n} exceeds the cap of {cap} for {what}")]
    GroundSetTooLarge { n: usize, cap: usize, what: &'static str },
    #[error("constraint is not a single matroid; this algorithm needs the exchange property")]
    NotASingleMatroid,
    #[error("oracle contract violated: {0}")]
    OracleContract(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The ground set `{0, .., n-1}`. Element indices are dense and stable for the
/// lifetime of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "ground set must contain at least one element".into(),
            ));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.n
    }

    /// The set containing every element.
    pub fn full_set(&self) -> ElementSet {
        ElementSet::from_sorted_unchecked((0..self.n).collect())
    }
}

/// A subset of the ground set, stored as a sorted duplicate-free index list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    members: Vec<Element>,
}

impl ElementSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(e: Element) -> Self {
        Self { members: vec![e] }
    }

    /// Builds from arbitrary input, sorting and removing duplicates.
    pub fn from_elements(mut members: Vec<Element>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    /// Caller guarantees `members` is sorted and duplicate-free.
    pub fn from_sorted_unchecked(members: Vec<Element>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.members
    }

    /// Largest member, if any. Cheap because the list is sorted.
    pub fn max_element(&self) -> Option<Element> {
        self.members.last().copied()
    }

    /// Inserts in place, keeping order. No-op when already present.
    pub fn insert(&mut self, e: Element) {
        if let Err(pos) = self.members.binary_search(&e) {
            self.members.insert(pos, e);
        }
    }

    pub fn remove(&mut self, e: Element) {
        if let Ok(pos) = self.members.binary_search(&e) {
            self.members.remove(pos);
        }
    }

    /// Copy of `self` with `e` added.
    pub fn with(&self, e: Element) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    /// Copy of `self` with `e` removed.
    pub fn without(&self, e: Element) -> Self {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut merged = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.members.iter().peekable(), other.members.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        merged.push(x);
                        a.next();
                    } else if y < x {
                        merged.push(y);
                        b.next();
                    } else {
                        merged.push(x);
                        a.next();
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    merged.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    merged.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { members: merged }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&e| !other.contains(e))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&e| other.contains(e))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.members.clone()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        Self::from_elements(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = Element;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Element>>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

/// Counts of adaptive rounds, function queries, matroid steps and matroid
/// queries, plus the threshold trajectory of a run. All counters are
/// monotone; one batch call moves them once, at the batch boundary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryLedger {
    /// Adaptive rounds of function queries.
    pub f_rounds: u64,
    /// Total function evaluations.
    pub f_queries: u64,
    /// Sequential steps of matroid queries.
    pub m_steps: u64,
    /// Total matroid queries.
    pub m_queries: u64,
    /// Threshold values, one per outer iteration of a threshold algorithm.
    pub t_history: Vec<f64>,
    /// Set when a rank was derived from independence queries by the
    /// sequential greedy fallback instead of a native rank oracle.
    pub rank_fallback_used: bool,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge_f_round(&mut self, queries: u64) {
        self.f_rounds += 1;
        self.f_queries += queries;
    }

    pub fn charge_m_step(&mut self, queries: u64) {
        self.m_steps += 1;
        self.m_queries += queries;
    }

    /// Extra matroid queries folded into an already-counted step.
    pub fn charge_m_queries(&mut self, queries: u64) {
        self.m_queries += queries;
    }

    pub fn push_threshold(&mut self, t: f64) {
        self.t_history.push(t);
    }
}

/// Black-box monotone submodular value oracle.
///
/// Implementations must be pure: the same query always returns the same
/// value, and concurrent read-only evaluation within a batch must be safe.
/// Algorithms call [`batch_eval`] rather than these methods, so that every
/// round is accounted for.
pub trait SubmodularOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Value `f(S)` of a single set.
    fn eval(&self, set: &ElementSet) -> f64;

    /// Evaluates a whole batch. The default maps [`Self::eval`]; oracles that
    /// share work across a batch (such as sampled surrogates) override it.
    fn eval_batch(&self, queries: &[ElementSet]) -> Vec<f64> {
        queries.iter().map(|q| self.eval(q)).collect()
    }

    /// Underlying value-oracle queries charged for a batch of `batch_len`
    /// evaluations. Direct oracles cost one query per evaluation; a sampled
    /// surrogate costs one per Monte Carlo sample.
    fn batch_cost(&self, batch_len: usize) -> u64 {
        batch_len as u64
    }

    /// Closed-form multilinear extension at `coords`, when the function
    /// family admits one. Used by exact surrogate backends; `None` falls
    /// back to exhaustive expectation.
    fn multilinear_closed_form(&self, _coords: &[f64]) -> Option<f64> {
        None
    }
}

/// Independence oracle for a downward-closed constraint, optionally with a
/// native rank oracle.
pub trait MatroidOracle: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Whether `set` is independent (feasible).
    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Rank of `set` when the family answers rank queries natively.
    fn native_rank(&self, _set: &ElementSet) -> Option<usize> {
        None
    }

    fn has_native_rank(&self) -> bool {
        self.native_rank(&ElementSet::empty()).is_some()
    }

    /// `false` for downward-closed constraints (matroid intersections) that
    /// do not satisfy the augmentation property.
    fn is_single_matroid(&self) -> bool {
        true
    }
}

fn check_in_range(set: &ElementSet, n: usize) -> Result<()> {
    match set.max_element() {
        Some(e) if e >= n => Err(Error::ElementOutOfRange { element: e, n }),
        _ => Ok(()),
    }
}

/// Evaluates one adaptive round of function queries.
///
/// Increments `f_rounds` by exactly 1 and `f_queries` by the oracle's cost
/// for the batch. Results within the batch do not depend on one another: the
/// query list is fixed before this call.
pub fn batch_eval(
    oracle: &dyn SubmodularOracle,
    queries: &[ElementSet],
    ledger: &mut QueryLedger,
) -> Result<Vec<f64>> {
    if queries.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = oracle.ground_size();
    for q in queries {
        check_in_range(q, n)?;
    }
    let values = oracle.eval_batch(queries);
    debug_assert_eq!(values.len(), queries.len());
    ledger.charge_f_round(oracle.batch_cost(queries.len()));
    Ok(values)
}

/// Runs one parallel step of independence queries.
pub fn batch_independent(
    oracle: &dyn MatroidOracle,
    queries: &[ElementSet],
    ledger: &mut QueryLedger,
) -> Result<Vec<bool>> {
    if queries.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = oracle.ground_size();
    for q in queries {
        check_in_range(q, n)?;
    }
    let verdicts: Vec<bool> = queries.iter().map(|q| oracle.is_independent(q)).collect();
    ledger.charge_m_step(queries.len() as u64);
    Ok(verdicts)
}

/// Runs one parallel step of rank queries. Requires a native rank oracle;
/// deriving ranks from independence queries here would silently turn one
/// step into many.
pub fn batch_rank(
    oracle: &dyn MatroidOracle,
    queries: &[ElementSet],
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if queries.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if !oracle.has_native_rank() {
        return Err(Error::RankOracleRequired);
    }
    let n = oracle.ground_size();
    for q in queries {
        check_in_range(q, n)?;
    }
    let ranks: Vec<usize> = queries
        .iter()
        .map(|q| oracle.native_rank(q).expect("native rank checked above"))
        .collect();
    ledger.charge_m_step(queries.len() as u64);
    Ok(ranks)
}

/// Parameters shared by the optimizers.
///
/// The asymptotic analysis leaves the constants behind `delta_iters`, `rho`
/// and `mc_samples` open; they are explicit knobs here, with the defaults
/// produced by the constructors below.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoParams {
    /// Threshold decay / approximation slack, in (0, 1).
    pub epsilon: f64,
    /// Step size of the continuous algorithm, in (0, 1]; 1/lambda must be an
    /// integer so the fractional point stays an exact convex combination.
    pub lambda: f64,
    /// Number of outer (threshold) iterations.
    pub delta_iters: usize,
    /// Parallel sequence trials per inner iteration (the ++ variant).
    pub rho: usize,
    /// RNG seed for the whole run.
    pub seed: u64,
    /// Monte Carlo samples per multilinear estimate.
    pub mc_samples: usize,
}

impl AlgoParams {
    pub fn new(
        epsilon: f64,
        lambda: f64,
        delta_iters: usize,
        rho: usize,
        seed: u64,
        mc_samples: usize,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in (0,1], got {lambda}"
            )));
        }
        let inv = 1.0 / lambda;
        if (inv - inv.round()).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "1/lambda must be an integer, got lambda = {lambda}"
            )));
        }
        if delta_iters == 0 {
            return Err(Error::InvalidParameter("delta_iters must be positive".into()));
        }
        if rho == 0 {
            return Err(Error::InvalidParameter("rho must be positive".into()));
        }
        if mc_samples == 0 {
            return Err(Error::InvalidParameter("mc_samples must be positive".into()));
        }
        Ok(Self {
            epsilon,
            lambda,
            delta_iters,
            rho,
            seed,
            mc_samples,
        })
    }

    /// Defaults for the combinatorial optimizers on a rank-`k` constraint.
    pub fn combinatorial(epsilon: f64, k: usize, seed: u64) -> Result<Self> {
        let delta = Self::default_delta_combinatorial(epsilon, k);
        Self::new(epsilon, 1.0, delta, 1, seed, 1)
    }

    /// Defaults for the continuous algorithm on a rank-`k` matroid over `n`
    /// elements.
    pub fn continuous(epsilon: f64, lambda: f64, k: usize, n: usize, seed: u64) -> Result<Self> {
        let delta = Self::default_delta_continuous(epsilon, lambda, k);
        let mc = Self::default_mc_samples(epsilon, n);
        Self::new(epsilon, lambda, delta, 1, seed, mc)
    }

    /// Outer-iteration budget for the combinatorial run.
    pub fn default_delta_combinatorial(epsilon: f64, k: usize) -> usize {
        let k = k.max(1) as f64;
        (((1.0 / epsilon) * (k / epsilon).ln()).ceil() as usize).max(1)
    }

    /// Outer-iteration budget for the inner runs of the continuous algorithm.
    pub fn default_delta_continuous(epsilon: f64, lambda: f64, k: usize) -> usize {
        let k = k.max(1) as f64;
        (((1.0 / epsilon) * (k / (epsilon * lambda)).ln()).ceil() as usize).max(1)
    }

    /// Monte Carlo sample budget per estimate.
    pub fn default_mc_samples(epsilon: f64, n: usize) -> usize {
        let n = n.max(2) as f64;
        ((48.0 / (epsilon * epsilon)) * n.ln()).ceil() as usize
    }

    /// `1/lambda` as the integer it is constrained to be.
    pub fn lambda_inverse(&self) -> usize {
        (1.0 / self.lambda).round() as usize
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut p = self.clone();
        p.seed = seed;
        p
    }
}

/// Seeded RNG plumbing. One generator drives a run; per-sample substreams are
/// derived from `(seed, round, index)` so that evaluation order inside a
/// batch cannot change results.
pub mod rng {
    use super::*;

    pub fn splitmix64(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Deterministic seed derivation for independent substreams.
    pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
        let mut state = seed ^ tag.rotate_left(17);
        let a = splitmix64(&mut state);
        state ^= index;
        a ^ splitmix64(&mut state)
    }

    /// The main stream of a run.
    pub fn run_rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Substream for sample `sample` of adaptive round `round`.
    pub fn substream(seed: u64, round: u64, sample: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed, 0x6D43, round), 0x51A7, sample))
    }
}

/// Monotonically increasing round counter for oracles that need to derive a
/// fresh substream per batch while staying `&self`.
#[derive(Debug, Default)]
pub struct RoundCounter(AtomicU64);

impl RoundCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next(&self) -> u64 {
        self.0.fetch_add(1, Ordering::Relaxed)
    }
}
