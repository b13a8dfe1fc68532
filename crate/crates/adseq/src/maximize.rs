//! The combinatorial optimizers: threshold-driven adaptive sequencing (with
//! an optional best-of-`rho` trial selection per inner iteration and an
//! optional binary-search variant for the commit position), the greedy and
//! lazy-greedy baselines, and an exhaustive solver for desk-scale instances.
//!
//! The engine maintains a solution `S`, a decaying threshold `t`, and a
//! survivor set `X` of candidate elements. Per inner iteration it draws a
//! random feasible sequence of the contracted matroid `M(S, X)`, filters the
//! survivors per position (feasible next to the prefix, marginal at least
//! `t`), commits the shortest prefix whose survivor set has dropped by an
//! epsilon fraction, and keeps exactly those survivors. All function
//! evaluations of an inner iteration form a single adaptive round.

use crate::core::{
    batch_eval, batch_independent, rng, AlgoParams, Element, ElementSet, Error, GroundSet,
    MatroidOracle, QueryLedger, Result, SubmodularOracle,
};
use crate::matroids::ContractedMatroid;
use crate::sequencing::{random_sequence, FeasibleSequence, SequenceBackend};

/// Hard cap for the exhaustive solver.
pub const BRUTE_FORCE_MAX_N: usize = 24;

/// Decaying threshold: after `iteration` decays, `t = (1-eps)^iteration * t0`.
/// Recomputed from the initial value each time, never accumulated.
#[derive(Debug, Clone)]
pub struct ThresholdState {
    pub initial: f64,
    pub t: f64,
    pub iteration: usize,
    epsilon: f64,
}

impl ThresholdState {
    pub fn new(initial: f64, epsilon: f64) -> Self {
        Self {
            initial,
            t: initial,
            iteration: 0,
            epsilon,
        }
    }

    pub fn decay(&mut self) {
        self.iteration += 1;
        self.t = self.initial * (1.0 - self.epsilon).powi(self.iteration as i32);
    }

    /// Values below this floor cannot matter at rank `k`; the outer loop
    /// stops early once `t` drops under it.
    pub fn floor(&self, k: usize) -> f64 {
        self.epsilon * self.initial / k.max(1) as f64
    }
}

/// Per-position survivor sets of one inner iteration: `filtered[i]` holds the
/// survivors that are feasible next to the length-`i` prefix with marginal at
/// least the threshold; `feasible[i]` drops the marginal condition.
#[derive(Debug, Clone)]
pub struct SurvivorChain {
    pub filtered: Vec<ElementSet>,
    pub feasible: Vec<ElementSet>,
}

impl SurvivorChain {
    /// The nesting that makes binary search sound: each filtered set contains
    /// the next, and sits inside its feasible superset.
    pub fn verify_nested(&self) -> Result<()> {
        for (i, w) in self.filtered.windows(2).enumerate() {
            if !w[1].is_subset_of(&w[0]) {
                return Err(Error::OracleContract(format!(
                    "survivor chain not nested at position {}",
                    i + 1
                )));
            }
        }
        for (f, m) in self.filtered.iter().zip(&self.feasible) {
            if !f.is_subset_of(m) {
                return Err(Error::OracleContract(
                    "filtered survivors escape their feasible superset".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One row per inner iteration of a threshold run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub outer_iteration: usize,
    pub threshold: f64,
    pub survivors_before: usize,
    pub chosen_trial: usize,
    pub i_star: usize,
    pub prefix_added: usize,
    pub survivors_after: usize,
}

/// Result of an optimizer run: the feasible solution, its value, the query
/// ledger, and the per-iteration trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub solution: ElementSet,
    pub value: f64,
    pub ledger: QueryLedger,
    pub trace: Vec<TraceRow>,
    /// Rank of the constraint as discovered during the run (0 when unknown).
    pub rank_hint: usize,
}

/// How the commit position is located within an inner iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IStarStrategy {
    /// Compute every position's survivors in one adaptive round.
    #[default]
    FullScan,
    /// Probe O(log r) positions, one adaptive round each. Fewer queries,
    /// more rounds; single-trial runs only.
    BinarySearch,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub rho: usize,
    pub backend: SequenceBackend,
    pub istar: IStarStrategy,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            rho: 1,
            backend: SequenceBackend::Sequential,
            istar: IStarStrategy::FullScan,
        }
    }
}

/// Instrumentation hook events, delivered synchronously at the named points.
/// Probes see oracle state but must not mutate it; their own oracle calls are
/// diagnostic and uncounted.
pub enum ProbeEvent<'a> {
    /// The threshold was set (initially) or decayed, with the solution in
    /// force at that moment.
    ThresholdUpdated { threshold: f64, solution: &'a ElementSet },
    /// A nonempty prefix was committed. `position_marginals[i]` is the
    /// marginal of the (i+1)-th committed element to everything before it;
    /// absent in the binary-search variant, which never sees those values.
    PrefixCommitted {
        solution_before: &'a ElementSet,
        prefix: &'a [Element],
        position_marginals: Option<&'a [f64]>,
    },
}

/// Inner-iteration budget per outer iteration: each inner iteration discards
/// at least an epsilon fraction of the survivors.
pub fn while_iteration_bound(n: usize, epsilon: f64) -> u64 {
    let ratio = (n.max(1) as f64).ln() / -(1.0 - epsilon).ln();
    ratio.ceil() as u64 + 1
}

/// Smallest position in `[lo, hi]` whose chain size is at most
/// `(1 - epsilon) * survivor_count`, probing O(log) positions.
///
/// Sound because the survivor chain is nested, so sizes are non-increasing
/// in the position. The caller guarantees the bound holds at `hi`.
pub fn find_istar_binary(
    mut size_at: impl FnMut(usize) -> usize,
    lo: usize,
    hi: usize,
    survivor_count: usize,
    epsilon: f64,
) -> usize {
    let limit = (1.0 - epsilon) * survivor_count as f64;
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if size_at(mid) as f64 <= limit {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub(crate) struct EngineOutput {
    pub(crate) solution: ElementSet,
    pub(crate) value: f64,
    pub(crate) trace: Vec<TraceRow>,
    pub(crate) rank_hint: usize,
}

/// A trial's outcome within one inner iteration.
struct TrialOutcome {
    i_star: usize,
    survivors_after: ElementSet,
    score: f64,
    marginals: Vec<f64>,
    committed_value: f64,
}

pub(crate) fn run_threshold_engine(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    params: &AlgoParams,
    opts: &EngineOptions,
    ledger: &mut QueryLedger,
    mut probe: Option<&mut dyn FnMut(ProbeEvent<'_>)>,
) -> Result<EngineOutput> {
    let n = f.ground_size();
    if n == 0 || n != constraint.ground_size() {
        return Err(Error::InvalidParameter(
            "function and constraint must share a nonempty ground set".into(),
        ));
    }
    if !(params.epsilon > 0.0 && params.epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0,1), got {}",
            params.epsilon
        )));
    }
    if params.delta_iters == 0 {
        return Err(Error::InvalidParameter("delta_iters must be positive".into()));
    }
    if opts.rho == 0 {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    if opts.rho > 1 && opts.istar == IStarStrategy::BinarySearch {
        return Err(Error::InvalidParameter(
            "binary-search commit positions support a single trial only".into(),
        ));
    }
    if opts.backend == SequenceBackend::RankOracle && !constraint.has_native_rank() {
        return Err(Error::RankOracleRequired);
    }

    let eps = params.epsilon;
    let ground = GroundSet::new(n)?;
    let inner_bound = while_iteration_bound(n, eps);
    let rounds_before = ledger.f_rounds;

    let mut run_rng = rng::run_rng(params.seed);
    let mut solution = ElementSet::empty();
    let mut value = f64::NAN;
    let mut threshold: Option<ThresholdState> = None;
    let mut matroid_rank: Option<usize> = None;
    let mut trace: Vec<TraceRow> = Vec::new();

    'outer: for outer in 0..params.delta_iters {
        let mut x = ground.full_set().difference(&solution);
        let mut inner_iters = 0u64;
        while !x.is_empty() {
            inner_iters += 1;
            if inner_iters > inner_bound {
                return Err(Error::OracleContract(
                    "survivors failed to shrink at the guaranteed rate".into(),
                ));
            }

            // sequences first (matroid queries only, zero adaptive rounds);
            // parallel trials cost the maximum of their step counts
            let contraction = ContractedMatroid::new(constraint, solution.clone(), x.clone());
            let mut trials: Vec<FeasibleSequence> = Vec::with_capacity(opts.rho);
            let mut max_steps = 0u64;
            let mut sum_queries = 0u64;
            for _ in 0..opts.rho {
                let mut scratch = QueryLedger::new();
                let seq = random_sequence(opts.backend, &contraction, &mut run_rng, &mut scratch)?;
                max_steps = max_steps.max(scratch.m_steps);
                sum_queries += scratch.m_queries;
                trials.push(seq);
            }
            ledger.m_steps += max_steps;
            ledger.m_queries += sum_queries;
            if matroid_rank.is_none() {
                // the very first sequence spans a base of the whole matroid
                matroid_rank = Some(trials[0].len());
            }

            let t_was_unset = threshold.is_none();
            let step = match opts.istar {
                IStarStrategy::FullScan => full_scan_iteration(
                    f,
                    constraint,
                    &solution,
                    &x,
                    &trials,
                    &mut threshold,
                    eps,
                    n,
                    ledger,
                )?,
                IStarStrategy::BinarySearch => binary_search_iteration(
                    f,
                    constraint,
                    &solution,
                    &x,
                    &trials[0],
                    &mut threshold,
                    eps,
                    n,
                    ledger,
                )?,
            };
            let (chosen_trial, outcome) = step;

            let t_now = threshold.as_ref().expect("set by the first round").t;
            if t_was_unset {
                // the threshold came into force this round, before any commit
                if let Some(p) = probe.as_deref_mut() {
                    p(ProbeEvent::ThresholdUpdated {
                        threshold: t_now,
                        solution: &solution,
                    });
                }
            }
            if outcome.i_star > 0 {
                let prefix = &trials[chosen_trial].order[..outcome.i_star];
                let solution_before = solution.clone();
                for &a in prefix {
                    solution.insert(a);
                }
                value = outcome.committed_value;
                if let Some(p) = probe.as_deref_mut() {
                    p(ProbeEvent::PrefixCommitted {
                        solution_before: &solution_before,
                        prefix,
                        position_marginals: if outcome.marginals.is_empty() {
                            None
                        } else {
                            Some(&outcome.marginals)
                        },
                    });
                }
            } else if value.is_nan() {
                value = outcome.committed_value;
            }
            trace.push(TraceRow {
                outer_iteration: outer,
                threshold: t_now,
                survivors_before: x.len(),
                chosen_trial,
                i_star: outcome.i_star,
                prefix_added: outcome.i_star,
                survivors_after: outcome.survivors_after.len(),
            });
            x = outcome.survivors_after;
        }

        let st = threshold
            .as_mut()
            .expect("first outer iteration always runs at least one inner iteration");
        st.decay();
        ledger.push_threshold(st.t);
        if let Some(p) = probe.as_deref_mut() {
            p(ProbeEvent::ThresholdUpdated {
                threshold: st.t,
                solution: &solution,
            });
        }
        if st.initial > 0.0 && st.t < st.floor(matroid_rank.unwrap_or(1)) {
            break 'outer;
        }
    }

    // ledger-asserted round bound: at most one adaptive round per inner
    // iteration, at most `inner_bound` inner iterations per outer iteration
    let used_rounds = ledger.f_rounds - rounds_before;
    let round_cap = match opts.istar {
        IStarStrategy::FullScan => params.delta_iters as u64 * inner_bound,
        IStarStrategy::BinarySearch => {
            let k = matroid_rank.unwrap_or(0) as f64;
            params.delta_iters as u64 * inner_bound * ((k + 1.0).log2().ceil() as u64 + 2)
        }
    };
    if used_rounds > round_cap {
        return Err(Error::OracleContract(format!(
            "adaptive rounds {used_rounds} exceed the bound {round_cap}"
        )));
    }
    if !constraint.is_independent(&solution) {
        return Err(Error::OracleContract(
            "returned solution is not feasible; the constraint oracle is inconsistent".into(),
        ));
    }

    Ok(EngineOutput {
        solution,
        value,
        trace,
        rank_hint: matroid_rank.unwrap_or(0),
    })
}

/// One full-scan inner iteration: every position's survivors in one batch.
#[allow(clippy::too_many_arguments)]
fn full_scan_iteration(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    solution: &ElementSet,
    x: &ElementSet,
    trials: &[FeasibleSequence],
    threshold: &mut Option<ThresholdState>,
    eps: f64,
    n: usize,
    ledger: &mut QueryLedger,
) -> Result<(usize, TrialOutcome)> {
    // prefixes of every trial as sets, and the candidate arena
    let mut bases: Vec<Vec<ElementSet>> = Vec::with_capacity(trials.len());
    let mut cand_sets: Vec<ElementSet> = Vec::new();
    // (trial, position, element) per arena entry
    let mut cand_refs: Vec<(usize, usize, Element)> = Vec::new();
    for (j, seq) in trials.iter().enumerate() {
        let r = seq.len();
        let mut row = Vec::with_capacity(r + 1);
        let mut base = solution.clone();
        row.push(base.clone());
        for i in 0..r {
            base.insert(seq.order[i]);
            row.push(base.clone());
        }
        for (i, prefix_set) in row.iter().enumerate() {
            for a in x {
                if !seq.order[..i].contains(&a) {
                    cand_sets.push(prefix_set.with(a));
                    cand_refs.push((j, i, a));
                }
            }
        }
        bases.push(row);
    }

    // candidate feasibility: one parallel step of matroid queries
    let feasible_mask: Vec<bool> = if cand_sets.is_empty() {
        Vec::new()
    } else {
        batch_independent(constraint, &cand_sets, ledger)?
    };

    let kept: Vec<usize> = (0..cand_sets.len()).filter(|&i| feasible_mask[i]).collect();

    // nothing to evaluate and the threshold already known: every survivor is
    // infeasible at every position, so this iteration costs no round
    if kept.is_empty() && threshold.is_some() {
        return Ok((
            0,
            TrialOutcome {
                i_star: 0,
                survivors_after: ElementSet::empty(),
                score: 0.0,
                marginals: Vec::new(),
                committed_value: f64::NAN,
            },
        ));
    }

    // the adaptive round: root + singletons while the threshold is unknown,
    // then every prefix value and every feasible candidate value
    let mut queries: Vec<ElementSet> = Vec::new();
    let fold_init = threshold.is_none();
    if fold_init {
        queries.push(ElementSet::empty());
        for e in 0..n {
            queries.push(ElementSet::singleton(e));
        }
    }
    let base_offset = queries.len();
    let mut base_index: Vec<usize> = Vec::with_capacity(trials.len() + 1);
    base_index.push(0);
    for row in &bases {
        for b in row {
            queries.push(b.clone());
        }
        base_index.push(queries.len() - base_offset);
    }
    let cand_offset = queries.len();
    for &ci in &kept {
        queries.push(cand_sets[ci].clone());
    }
    let values = batch_eval(f, &queries, ledger)?;

    if fold_init {
        let t0 = values[1..=n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let st = ThresholdState::new(t0, eps);
        ledger.push_threshold(st.t);
        *threshold = Some(st);
    }
    let t = threshold.as_ref().unwrap().t;
    let base_value = |j: usize, i: usize| values[base_offset + base_index[j] + i];

    // per-trial survivor chains: position filters first, then the running
    // intersection that the exact-arithmetic semantics guarantee anyway
    // (marginals only shrink along a prefix; float rounding must not be
    // allowed to flip a survivor back in)
    let mut chains: Vec<SurvivorChain> = trials
        .iter()
        .map(|seq| SurvivorChain {
            filtered: vec![ElementSet::empty(); seq.len() + 1],
            feasible: vec![ElementSet::empty(); seq.len() + 1],
        })
        .collect();
    for (pos, &ci) in kept.iter().enumerate() {
        let (j, i, a) = cand_refs[ci];
        chains[j].feasible[i].insert(a);
        let marginal = values[cand_offset + pos] - base_value(j, i);
        if marginal >= t {
            chains[j].filtered[i].insert(a);
        }
    }
    for chain in &mut chains {
        for i in 1..chain.filtered.len() {
            chain.filtered[i] = chain.filtered[i].intersection(&chain.filtered[i - 1]);
        }
    }

    // per-trial commit position and score, then the argmax trial
    let x_len = x.len();
    let limit = (1.0 - eps) * x_len as f64;
    let mut best: Option<(usize, TrialOutcome)> = None;
    for (j, seq) in trials.iter().enumerate() {
        chains[j].verify_nested()?;
        let i_star = chains[j]
            .filtered
            .iter()
            .position(|s| s.len() as f64 <= limit)
            .ok_or_else(|| {
                Error::OracleContract(
                    "no admissible commit position; the final survivor set must be empty".into(),
                )
            })?;
        debug_assert_eq!(
            i_star,
            find_istar_binary(|i| chains[j].filtered[i].len(), 0, seq.len(), x_len, eps)
        );
        let score = if i_star == 0 {
            0.0
        } else {
            (base_value(j, i_star) - base_value(j, 0)) / i_star as f64
        };
        let marginals: Vec<f64> = (1..=i_star)
            .map(|i| base_value(j, i) - base_value(j, i - 1))
            .collect();
        let outcome = TrialOutcome {
            i_star,
            survivors_after: chains[j].filtered[i_star].clone(),
            score,
            marginals,
            committed_value: base_value(j, i_star),
        };
        let better = match &best {
            None => true,
            Some((_, cur)) => outcome.score > cur.score,
        };
        if better {
            best = Some((j, outcome));
        }
    }
    Ok(best.expect("at least one trial"))
}

/// One binary-search inner iteration: probe O(log r) positions of the single
/// trial's chain, each probe its own adaptive round.
#[allow(clippy::too_many_arguments)]
fn binary_search_iteration(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    solution: &ElementSet,
    x: &ElementSet,
    seq: &FeasibleSequence,
    threshold: &mut Option<ThresholdState>,
    eps: f64,
    n: usize,
    ledger: &mut QueryLedger,
) -> Result<(usize, TrialOutcome)> {
    let r = seq.len();
    let mut row = Vec::with_capacity(r + 1);
    let mut base = solution.clone();
    row.push(base.clone());
    for i in 0..r {
        base.insert(seq.order[i]);
        row.push(base.clone());
    }

    // probed positions: filtered survivors and the prefix value
    let mut cache: Vec<Option<(ElementSet, f64)>> = vec![None; r + 1];
    let probe_position = |i: usize,
                              threshold: &mut Option<ThresholdState>,
                              cache: &mut Vec<Option<(ElementSet, f64)>>,
                              ledger: &mut QueryLedger|
     -> Result<()> {
        if cache[i].is_some() {
            return Ok(());
        }
        let cands: Vec<Element> = x
            .iter()
            .filter(|&a| !seq.order[..i].contains(&a))
            .collect();
        let mut feasible: Vec<Element> = Vec::new();
        if !cands.is_empty() {
            let fq: Vec<ElementSet> = cands.iter().map(|&a| row[i].with(a)).collect();
            let verdicts = batch_independent(constraint, &fq, ledger)?;
            feasible = cands
                .into_iter()
                .zip(verdicts)
                .filter(|(_, ok)| *ok)
                .map(|(a, _)| a)
                .collect();
        }
        if feasible.is_empty() && threshold.is_some() {
            // nothing to price at this position; no round spent
            cache[i] = Some((ElementSet::empty(), f64::NAN));
            return Ok(());
        }

        let mut queries: Vec<ElementSet> = Vec::new();
        let fold_init = threshold.is_none();
        if fold_init {
            queries.push(ElementSet::empty());
            for e in 0..n {
                queries.push(ElementSet::singleton(e));
            }
        }
        let base_at = queries.len();
        queries.push(row[i].clone());
        for &a in &feasible {
            queries.push(row[i].with(a));
        }
        let values = batch_eval(f, &queries, ledger)?;
        if fold_init {
            let t0 = values[1..=n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let st = ThresholdState::new(t0, eps);
            ledger.push_threshold(st.t);
            *threshold = Some(st);
        }
        let t = threshold.as_ref().unwrap().t;
        let base_value = values[base_at];
        let survivors: ElementSet = feasible
            .iter()
            .enumerate()
            .filter(|(idx, _)| values[base_at + 1 + idx] - base_value >= t)
            .map(|(_, &a)| a)
            .collect();
        cache[i] = Some((survivors, base_value));
        Ok(())
    };

    let x_len = x.len();
    let limit = (1.0 - eps) * x_len as f64;
    let (mut lo, mut hi) = (0usize, r);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        probe_position(mid, threshold, &mut cache, ledger)?;
        if cache[mid].as_ref().unwrap().0.len() as f64 <= limit {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    probe_position(lo, threshold, &mut cache, ledger)?;
    let (survivors, mut committed_value) = cache[lo].take().unwrap();
    if committed_value.is_nan() && lo > 0 {
        // the probe skipped pricing this prefix; the commit needs its value
        committed_value = batch_eval(f, std::slice::from_ref(&row[lo]), ledger)?[0];
    }
    if survivors.len() as f64 > limit {
        return Err(Error::OracleContract(
            "no admissible commit position; the final survivor set must be empty".into(),
        ));
    }
    Ok((
        0,
        TrialOutcome {
            i_star: lo,
            survivors_after: survivors,
            score: 0.0,
            marginals: Vec::new(),
            committed_value,
        },
    ))
}

fn assemble(out: EngineOutput, ledger: QueryLedger) -> SolutionReport {
    SolutionReport {
        solution: out.solution,
        value: out.value,
        ledger,
        trace: out.trace,
        rank_hint: out.rank_hint,
    }
}

/// Threshold optimizer with a single sequence trial per inner iteration.
/// Expected approximation close to 1/2 on a matroid constraint.
pub fn adaptive_sequencing(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    params: &AlgoParams,
) -> Result<SolutionReport> {
    let mut ledger = QueryLedger::new();
    let out = run_threshold_engine(
        f,
        constraint,
        params,
        &EngineOptions::default(),
        &mut ledger,
        None,
    )?;
    Ok(assemble(out, ledger))
}

/// Best-of-`rho` variant: per inner iteration, `rho` independent sequence
/// trials run in the same adaptive round, each is scored by its mean prefix
/// marginal, and the best trial's prefix and survivors are committed. Lifts
/// the expectation guarantee to high probability; on an intersection of `P`
/// matroids the guarantee degrades to roughly `1/(P+1)`.
pub fn adaptive_sequencing_pp(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    params: &AlgoParams,
) -> Result<SolutionReport> {
    let mut ledger = QueryLedger::new();
    let opts = EngineOptions {
        rho: params.rho,
        ..EngineOptions::default()
    };
    let out = run_threshold_engine(f, constraint, params, &opts, &mut ledger, None)?;
    Ok(assemble(out, ledger))
}

/// Full-control variant: sequence backend, commit-position strategy, trial
/// count, and an instrumentation probe.
pub fn adaptive_sequencing_with(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    params: &AlgoParams,
    opts: &EngineOptions,
    probe: Option<&mut dyn FnMut(ProbeEvent<'_>)>,
) -> Result<SolutionReport> {
    let mut ledger = QueryLedger::new();
    let out = run_threshold_engine(f, constraint, params, opts, &mut ledger, probe)?;
    Ok(assemble(out, ledger))
}

/// Classic greedy: add the feasible element of largest marginal (lowest
/// index on ties) until nothing feasible remains. One adaptive round per
/// pick; the sequentiality baseline.
pub fn greedy(f: &dyn SubmodularOracle, constraint: &dyn MatroidOracle) -> Result<SolutionReport> {
    let n = f.ground_size();
    if n == 0 || n != constraint.ground_size() {
        return Err(Error::InvalidParameter(
            "function and constraint must share a nonempty ground set".into(),
        ));
    }
    let mut ledger = QueryLedger::new();
    let mut solution = ElementSet::empty();
    let mut value = f64::NAN;
    loop {
        let remaining: Vec<Element> = (0..n).filter(|&e| !solution.contains(e)).collect();
        let mut cands: Vec<Element> = Vec::new();
        if !remaining.is_empty() {
            let queries: Vec<ElementSet> = remaining.iter().map(|&e| solution.with(e)).collect();
            let verdicts = batch_independent(constraint, &queries, &mut ledger)?;
            cands = remaining
                .into_iter()
                .zip(verdicts)
                .filter(|(_, ok)| *ok)
                .map(|(e, _)| e)
                .collect();
        }
        if cands.is_empty() {
            break;
        }
        let queries: Vec<ElementSet> = cands.iter().map(|&a| solution.with(a)).collect();
        let values = batch_eval(f, &queries, &mut ledger)?;
        let mut best = 0usize;
        for idx in 1..cands.len() {
            if values[idx] > values[best] {
                best = idx;
            }
        }
        solution.insert(cands[best]);
        value = values[best];
    }
    if value.is_nan() {
        // nothing was ever addable; one round to price the empty solution
        value = batch_eval(f, &[ElementSet::empty()], &mut ledger)?[0];
    }
    let rank_hint = solution.len();
    Ok(SolutionReport {
        solution,
        value,
        ledger,
        trace: Vec::new(),
        rank_hint,
    })
}

/// Lazy greedy: keeps stale upper bounds on marginals in a max-heap and only
/// re-evaluates the top. Far fewer queries than greedy, identical solutions
/// under the shared lowest-index tie-break, but inherently sequential.
pub fn lazy_greedy(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
) -> Result<SolutionReport> {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;

    let n = f.ground_size();
    if n == 0 || n != constraint.ground_size() {
        return Err(Error::InvalidParameter(
            "function and constraint must share a nonempty ground set".into(),
        ));
    }

    struct Entry {
        bound: f64,
        element: Element,
        union_value: f64,
        stamp: usize,
    }
    impl PartialEq for Entry {
        fn eq(&self, other: &Self) -> bool {
            self.bound == other.bound && self.element == other.element
        }
    }
    impl Eq for Entry {}
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            // max bound first; lowest element index wins ties
            self.bound
                .total_cmp(&other.bound)
                .then_with(|| other.element.cmp(&self.element))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut ledger = QueryLedger::new();
    let mut queries = vec![ElementSet::empty()];
    for e in 0..n {
        queries.push(ElementSet::singleton(e));
    }
    let values = batch_eval(f, &queries, &mut ledger)?;
    let mut value = values[0];
    let mut solution = ElementSet::empty();
    let mut stamp = 0usize;

    let mut heap: BinaryHeap<Entry> = (0..n)
        .map(|e| Entry {
            bound: values[e + 1] - value,
            element: e,
            union_value: values[e + 1],
            stamp: 0,
        })
        .collect();

    while let Some(top) = heap.pop() {
        let cand = solution.with(top.element);
        let ok = batch_independent(constraint, std::slice::from_ref(&cand), &mut ledger)?[0];
        if !ok {
            continue; // infeasible now means infeasible forever
        }
        if top.stamp == stamp {
            solution = cand;
            value = top.union_value;
            stamp += 1;
        } else {
            let v = batch_eval(f, std::slice::from_ref(&cand), &mut ledger)?[0];
            heap.push(Entry {
                bound: v - value,
                element: top.element,
                union_value: v,
                stamp,
            });
        }
    }
    let rank_hint = solution.len();
    Ok(SolutionReport {
        solution,
        value,
        ledger,
        trace: Vec::new(),
        rank_hint,
    })
}

/// Exact maximum over all feasible sets by depth-first search with
/// downward-closure pruning. The optimum oracle for everything else; capped
/// at [`BRUTE_FORCE_MAX_N`] elements.
pub fn brute_force(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
) -> Result<SolutionReport> {
    let n = f.ground_size();
    if n == 0 || n != constraint.ground_size() {
        return Err(Error::InvalidParameter(
            "function and constraint must share a nonempty ground set".into(),
        ));
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::GroundSetTooLarge {
            n,
            cap: BRUTE_FORCE_MAX_N,
            what: "exhaustive search",
        });
    }

    struct Dfs<'a> {
        f: &'a dyn SubmodularOracle,
        m: &'a dyn MatroidOracle,
        n: usize,
        ledger: QueryLedger,
        best_value: f64,
        best_set: ElementSet,
    }
    impl Dfs<'_> {
        fn go(&mut self, from: usize, current: &mut ElementSet) {
            self.ledger.charge_f_round(1);
            let v = self.f.eval(current);
            if v > self.best_value {
                self.best_value = v;
                self.best_set = current.clone();
            }
            for a in from..self.n {
                let cand = current.with(a);
                self.ledger.charge_m_step(1);
                if self.m.is_independent(&cand) {
                    current.insert(a);
                    self.go(a + 1, current);
                    current.remove(a);
                }
            }
        }
    }

    let mut dfs = Dfs {
        f,
        m: constraint,
        n,
        ledger: QueryLedger::new(),
        best_value: f64::NEG_INFINITY,
        best_set: ElementSet::empty(),
    };
    dfs.go(0, &mut ElementSet::empty());
    let rank_hint = dfs.best_set.len();
    Ok(SolutionReport {
        solution: dfs.best_set,
        value: dfs.best_value,
        ledger: dfs.ledger,
        trace: Vec::new(),
        rank_hint,
    })
}

/// Diagnostic: the largest marginal of any single feasible augmentation of
/// `s`. Uncounted direct oracle access, for invariant checks.
pub fn max_feasible_marginal(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    s: &ElementSet,
) -> Option<f64> {
    let n = f.ground_size();
    let base = f.eval(s);
    (0..n)
        .filter(|&a| !s.contains(a) && constraint.is_independent(&s.with(a)))
        .map(|a| f.eval(&s.with(a)) - base)
        .fold(None, |acc, m| Some(acc.map_or(m, |b: f64| b.max(m))))
}
