//! Operational surface: instance files, the experiment runner, CSV output,
//! fixed desk-scale suites, and the CLI behind the `adseq` binary.

pub mod cli;
pub mod formats;
pub mod suite;

use std::io::Write;
use std::time::Instant;

use crate::continuous::{accelerated_continuous_greedy_with_backend, swap_round, SurrogateBackend};
use crate::core::{
    batch_eval, rng, AlgoParams, ElementSet, Error, MatroidOracle, QueryLedger, Result,
    SubmodularOracle,
};
use crate::functions::ModularFunction;
use crate::maximize::{
    adaptive_sequencing, adaptive_sequencing_pp, brute_force, greedy, lazy_greedy, SolutionReport,
    BRUTE_FORCE_MAX_N,
};

pub use formats::{parse_instance, ConstraintSpec, FunctionSpec, InstanceSpec};

/// Above this size the harness stops computing exact optima and exact
/// intersection ranks and falls back to greedy bounds.
pub const EXACT_REFERENCE_MAX_N: usize = 20;

/// The algorithms the runner can dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Aseq,
    AseqPp,
    Acg,
    Greedy,
    Lazy,
    Brute,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Aseq => "aseq",
            Algo::AseqPp => "aseq-pp",
            Algo::Acg => "acg",
            Algo::Greedy => "greedy",
            Algo::Lazy => "lazy",
            Algo::Brute => "brute",
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "aseq" => Algo::Aseq,
            "aseq-pp" => Algo::AseqPp,
            "acg" => Algo::Acg,
            "greedy" => Algo::Greedy,
            "lazy" => Algo::Lazy,
            "brute" => Algo::Brute,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown algorithm `{other}` (expected aseq, aseq-pp, acg, greedy, lazy or brute)"
                )))
            }
        })
    }
}

/// One run of one algorithm on one instance; counters copied verbatim from
/// the ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub rho: Option<usize>,
    pub seed: u64,
    pub value: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub f_rounds: u64,
    pub f_queries: u64,
    pub m_steps: u64,
    pub m_queries: u64,
    pub wall_ms: f64,
}

/// Mean/std aggregate over the trials of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub rho: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub value_mean: f64,
    pub value_std: f64,
    pub f_rounds_mean: f64,
    pub f_rounds_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OutputRow {
    Run(ResultRow),
    Summary(SummaryRow),
}

/// Fixed column order; summary rows carry their aggregates in `value`,
/// `f_rounds` and the trailing std columns, and are tagged by the
/// `+summary` suffix on `algo`.
pub const CSV_HEADER: &str = "algo,n,k,epsilon,lambda,rho,seed,value,opt,ratio,f_rounds,f_queries,m_steps,m_queries,wall_ms,value_std,f_rounds_std,trials";

fn opt_cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), |x| x.to_string())
}

impl OutputRow {
    pub fn csv_line(&self) -> String {
        match self {
            OutputRow::Run(r) => format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3},,,1",
                r.algo,
                r.n,
                r.k,
                r.epsilon,
                opt_cell(&r.lambda),
                opt_cell(&r.rho),
                r.seed,
                r.value,
                opt_cell(&r.opt),
                opt_cell(&r.ratio),
                r.f_rounds,
                r.f_queries,
                r.m_steps,
                r.m_queries,
                r.wall_ms,
            ),
            OutputRow::Summary(s) => format!(
                "{}+summary,{},{},{},{},{},{},{},,,{},,,,,{},{},{}",
                s.algo,
                s.n,
                s.k,
                s.epsilon,
                opt_cell(&s.lambda),
                opt_cell(&s.rho),
                s.seed,
                s.value_mean,
                s.f_rounds_mean,
                s.value_std,
                s.f_rounds_std,
                s.trials,
            ),
        }
    }
}

/// Appends rows to a CSV file, writing the header first when the file is new
/// or empty. A single writer serializes concurrent trial output.
pub fn append_rows(path: &std::path::Path, rows: &[OutputRow]) -> Result<()> {
    let need_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if need_header {
        writeln!(file, "{CSV_HEADER}")?;
    }
    for row in rows {
        writeln!(file, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Rank of the constraint for reporting. Exact for single matroids and for
/// anything desk-scale; a greedy lower bound (flagged on stderr) for large
/// intersections, where exact rank would cost exponential time.
pub fn constraint_rank(constraint: &dyn MatroidOracle) -> usize {
    let n = constraint.ground_size();
    let full: ElementSet = (0..n).collect();
    if constraint.is_single_matroid() || n <= EXACT_REFERENCE_MAX_N {
        if constraint.is_single_matroid() {
            crate::matroids::rank_uncounted(constraint, &full)
        } else {
            // exact largest feasible set: exhaustive search on a unit-weight
            // objective
            let unit = ModularFunction::new(vec![1.0; n]).expect("nonempty");
            brute_force(&unit, constraint)
                .map(|r| r.solution.len())
                .unwrap_or(0)
        }
    } else {
        eprintln!(
            "note: reporting a greedy lower bound for the rank of an intersection on {n} elements"
        );
        crate::matroids::rank_uncounted(constraint, &full)
    }
}

/// Runs `trials` seeded repetitions of one algorithm on one instance and
/// returns one row per trial, plus a summary row when there is more than one
/// trial. The optimum column is filled by exhaustive search at desk scale.
pub fn run_experiment(
    instance: &InstanceSpec,
    algo: Algo,
    params: &AlgoParams,
    trials: usize,
) -> Result<Vec<OutputRow>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    instance.validate()?;
    let f = instance.function.build()?;
    let constraint = instance.constraint.build()?;
    let n = instance.ground_size();

    if algo == Algo::Acg && !constraint.is_single_matroid() {
        return Err(Error::NotASingleMatroid);
    }
    if algo == Algo::Brute && n > BRUTE_FORCE_MAX_N {
        return Err(Error::GroundSetTooLarge {
            n,
            cap: BRUTE_FORCE_MAX_N,
            what: "exhaustive search",
        });
    }

    let k = constraint_rank(constraint.as_ref());
    let opt = if algo != Algo::Brute && n <= EXACT_REFERENCE_MAX_N {
        Some(brute_force(f.as_ref(), constraint.as_ref())?.value)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(trials + 1);
    let mut values = Vec::with_capacity(trials);
    let mut rounds = Vec::with_capacity(trials);
    for trial in 0..trials {
        let trial_params = params.with_seed(params.seed.wrapping_add(trial as u64));
        let start = Instant::now();
        let (value, ledger) = run_one(f.as_ref(), constraint.as_ref(), algo, &trial_params)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        values.push(value);
        rounds.push(ledger.f_rounds as f64);
        rows.push(OutputRow::Run(ResultRow {
            algo: algo.name().to_string(),
            n,
            k,
            epsilon: trial_params.epsilon,
            lambda: (algo == Algo::Acg).then_some(trial_params.lambda),
            rho: (algo == Algo::AseqPp).then_some(trial_params.rho),
            seed: trial_params.seed,
            value,
            opt,
            ratio: opt.map(|o| if o > 0.0 { value / o } else { 1.0 }),
            f_rounds: ledger.f_rounds,
            f_queries: ledger.f_queries,
            m_steps: ledger.m_steps,
            m_queries: ledger.m_queries,
            wall_ms,
        }));
    }
    if trials > 1 {
        let (value_mean, value_std) = crate::stats::mean_and_sample_std(&values);
        let (rounds_mean, rounds_std) = crate::stats::mean_and_sample_std(&rounds);
        rows.push(OutputRow::Summary(SummaryRow {
            algo: algo.name().to_string(),
            n,
            k,
            epsilon: params.epsilon,
            lambda: (algo == Algo::Acg).then_some(params.lambda),
            rho: (algo == Algo::AseqPp).then_some(params.rho),
            seed: params.seed,
            trials,
            value_mean,
            value_std,
            f_rounds_mean: rounds_mean,
            f_rounds_std: rounds_std,
        }));
    }
    Ok(rows)
}

fn run_one(
    f: &dyn SubmodularOracle,
    constraint: &dyn MatroidOracle,
    algo: Algo,
    params: &AlgoParams,
) -> Result<(f64, QueryLedger)> {
    let report: SolutionReport = match algo {
        Algo::Aseq => adaptive_sequencing(f, constraint, params)?,
        Algo::AseqPp => adaptive_sequencing_pp(f, constraint, params)?,
        Algo::Greedy => greedy(f, constraint)?,
        Algo::Lazy => lazy_greedy(f, constraint)?,
        Algo::Brute => brute_force(f, constraint)?,
        Algo::Acg => {
            let acg = accelerated_continuous_greedy_with_backend(
                f,
                constraint,
                params,
                SurrogateBackend::Estimated {
                    samples: params.mc_samples,
                },
            )?;
            let mut ledger = acg.ledger;
            let mut round_rng = rng::run_rng(rng::derive_seed(params.seed, 0x5A9, 0));
            let rounded = swap_round(&acg.point, constraint, &mut round_rng, &mut ledger)?;
            let value = batch_eval(f, std::slice::from_ref(&rounded), &mut ledger)?[0];
            return Ok((value, ledger));
        }
    };
    Ok((report.value, report.ledger))
}
