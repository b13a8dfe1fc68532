//! Random feasible sequences: orderings `(a_1, .., a_r)` where each `a_i` is
//! uniform over the elements that keep the prefix independent.
//!
//! Three generators produce the same law with very different step costs:
//! the sequential reference walks one position per step; the rank-oracle
//! version batches all prefix ranks of a single permutation into one step;
//! the independence-oracle version repeatedly commits the longest feasible
//! prefix of a permutation of the survivors, two steps per round.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::core::{
    batch_independent, batch_rank, Element, ElementSet, Error, MatroidOracle, QueryLedger, Result,
};
use crate::matroids::ContractedMatroid;

/// Which generator produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Sequential,
    RankParallel,
    IndependenceParallel,
}

/// How the optimizers should generate their sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SequenceBackend {
    #[default]
    Sequential,
    RankOracle,
    IndependenceOracle,
}

/// A maximal feasible ordering together with the matroid-step cost of
/// producing it. Every prefix is independent in the contracted matroid and
/// the full order is one of its bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSequence {
    pub order: Vec<Element>,
    pub kind: GeneratorKind,
    pub m_steps: u64,
}

impl FeasibleSequence {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Prefix `{a_1, .., a_i}` as a set.
    pub fn prefix(&self, i: usize) -> ElementSet {
        ElementSet::from_elements(self.order[..i].to_vec())
    }
}

/// Dispatches to the configured generator.
pub fn random_sequence<R: Rng>(
    backend: SequenceBackend,
    m: &ContractedMatroid<'_>,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<FeasibleSequence> {
    match backend {
        SequenceBackend::Sequential => random_sequence_sequential(m, rng, ledger),
        SequenceBackend::RankOracle => random_sequence_rank(m, rng, ledger),
        SequenceBackend::IndependenceOracle => random_sequence_independence(m, rng, ledger),
    }
}

/// Sequential reference: at each position, one parallel batch tests every
/// remaining candidate against the current prefix and a uniform survivor is
/// drawn. Costs one step per position, plus one final step when exhaustion
/// has to be discovered by querying.
pub fn random_sequence_sequential<R: Rng>(
    m: &ContractedMatroid<'_>,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<FeasibleSequence> {
    let steps_before = ledger.m_steps;
    let mut order: Vec<Element> = Vec::new();
    let mut order_set = ElementSet::empty();
    let mut pool: Vec<Element> = m.universe().to_vec();
    while !pool.is_empty() {
        let queries: Vec<ElementSet> = pool.iter().map(|&a| order_set.with(a)).collect();
        let verdicts = batch_independent(m, &queries, ledger)?;
        let feasible: Vec<Element> = pool
            .iter()
            .zip(&verdicts)
            .filter(|(_, &ok)| ok)
            .map(|(&a, _)| a)
            .collect();
        if feasible.is_empty() {
            break;
        }
        let pick = *feasible.choose(rng).expect("nonempty");
        order.push(pick);
        order_set.insert(pick);
        pool = feasible.into_iter().filter(|&a| a != pick).collect();
    }
    Ok(FeasibleSequence {
        order,
        kind: GeneratorKind::Sequential,
        m_steps: ledger.m_steps - steps_before,
    })
}

/// Rank-oracle generator: permute the universe, batch all prefix ranks in a
/// single step, and keep exactly the positions where the rank increases.
pub fn random_sequence_rank<R: Rng>(
    m: &ContractedMatroid<'_>,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<FeasibleSequence> {
    if !m.has_native_rank() {
        return Err(Error::RankOracleRequired);
    }
    let steps_before = ledger.m_steps;
    let mut perm: Vec<Element> = m.universe().to_vec();
    perm.shuffle(rng);
    if perm.is_empty() {
        return Ok(FeasibleSequence {
            order: Vec::new(),
            kind: GeneratorKind::RankParallel,
            m_steps: 0,
        });
    }
    let mut prefix = ElementSet::empty();
    let queries: Vec<ElementSet> = perm
        .iter()
        .map(|&b| {
            prefix.insert(b);
            prefix.clone()
        })
        .collect();
    let ranks = batch_rank(m, &queries, ledger)?;
    // the contraction answers each query with one extra base-rank lookup for
    // the anchor, shared across the batch
    ledger.charge_m_queries(1);

    let mut order = Vec::new();
    let mut prev = 0usize;
    for (j, &r) in ranks.iter().enumerate() {
        if r == prev + 1 {
            order.push(perm[j]);
            prev = r;
        } else if r != prev {
            return Err(Error::OracleContract(format!(
                "prefix rank jumped from {prev} to {r}"
            )));
        }
    }
    Ok(FeasibleSequence {
        order,
        kind: GeneratorKind::RankParallel,
        m_steps: ledger.m_steps - steps_before,
    })
}

/// Independence-oracle generator: per round, permute the survivors, commit
/// the longest feasible prefix (one step of prefix queries), then refilter
/// the survivors against the grown prefix (a second step).
pub fn random_sequence_independence<R: Rng>(
    m: &ContractedMatroid<'_>,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<FeasibleSequence> {
    let steps_before = ledger.m_steps;
    let mut order: Vec<Element> = Vec::new();
    let mut order_set = ElementSet::empty();
    let mut x: Vec<Element> = m.universe().to_vec();
    while !x.is_empty() {
        x.shuffle(rng);

        let mut prefix = order_set.clone();
        let queries: Vec<ElementSet> = x
            .iter()
            .map(|&b| {
                prefix.insert(b);
                prefix.clone()
            })
            .collect();
        let verdicts = batch_independent(m, &queries, ledger)?;
        let take = verdicts.iter().take_while(|&&ok| ok).count();
        for &b in &x[..take] {
            order.push(b);
            order_set.insert(b);
        }

        // refilter every survivor against the grown prefix; just-committed
        // elements answer trivially and drop out below
        let queries2: Vec<ElementSet> = x.iter().map(|&a| order_set.with(a)).collect();
        let verdicts2 = batch_independent(m, &queries2, ledger)?;
        x = x
            .iter()
            .zip(&verdicts2)
            .filter(|(&a, &ok)| ok && !order_set.contains(a))
            .map(|(&a, _)| a)
            .collect();
    }
    Ok(FeasibleSequence {
        order,
        kind: GeneratorKind::IndependenceParallel,
        m_steps: ledger.m_steps - steps_before,
    })
}

/// Diagnostic: asserts the defining properties of a random feasible sequence
/// outcome — every prefix feasible, and the whole order maximal. Queries the
/// oracle directly without ledger accounting.
pub fn verify_sequence_shape(seq: &FeasibleSequence, m: &ContractedMatroid<'_>) -> Result<()> {
    let mut prefix = ElementSet::empty();
    for (i, &a) in seq.order.iter().enumerate() {
        prefix.insert(a);
        if !m.is_independent(&prefix) {
            return Err(Error::OracleContract(format!(
                "prefix of length {} is not feasible",
                i + 1
            )));
        }
    }
    for a in m.universe() {
        if !prefix.contains(a) && m.is_independent(&prefix.with(a)) {
            return Err(Error::OracleContract(format!(
                "element {a} extends the sequence; it is not maximal"
            )));
        }
    }
    Ok(())
}
