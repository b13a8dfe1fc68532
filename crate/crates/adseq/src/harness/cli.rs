//! The `adseq` command-line interface.
//!
//! ```text
//! adseq run --function f.txt --matroid m.txt --algo aseq-pp --eps 0.05 \
//!           [--lambda L] [--rho R] [--trials T] --seed S --out rows.csv
//! adseq brute --function f.txt --matroid m.txt --out rows.csv
//! adseq verify-sequence --matroid m.txt --samples 10000 [--seed S]
//! adseq bench --suite scaling|hard-partition [--out rows.csv] [--seed S]
//! ```
//!
//! Exit codes: 0 on success, 2 on validation errors (bad files, bad
//! parameters, refused algorithm/constraint combinations), 1 on internal
//! errors and failed verifications.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::core::{rng, AlgoParams, ElementSet, Error, QueryLedger, Result};
use crate::harness::formats::{parse_instance, ConstraintSpec};
use crate::harness::{append_rows, constraint_rank, run_experiment, Algo, OutputRow, ResultRow};
use crate::matroids::{ContractedMatroid, HiddenPartitionInstance};
use crate::sequencing::{
    random_sequence_independence, random_sequence_rank, random_sequence_sequential,
};

#[derive(Parser)]
#[command(
    name = "adseq",
    about = "Low-adaptivity submodular maximization under matroid constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an optimizer on an instance and append result rows to a CSV file.
    Run {
        /// Function spec file (modular | coverage).
        #[arg(long)]
        function: PathBuf,
        /// Matroid spec file (uniform | partition | graphic | intersect | hidden-partition).
        #[arg(long)]
        matroid: PathBuf,
        /// aseq | aseq-pp | acg | greedy | lazy | brute.
        #[arg(long)]
        algo: String,
        /// Threshold decay / approximation slack, in (0,1).
        #[arg(long)]
        eps: f64,
        /// Continuous step size (acg only); 1/lambda must be an integer.
        #[arg(long)]
        lambda: Option<f64>,
        /// Parallel sequence trials per inner iteration (aseq-pp only).
        #[arg(long)]
        rho: Option<usize>,
        /// Seeded repetitions; more than one adds a summary row.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: u64,
        /// Output CSV, appended to.
        #[arg(long)]
        out: PathBuf,
        /// Outer iteration budget; default derived from eps and the rank.
        #[arg(long)]
        delta: Option<usize>,
        /// Monte Carlo samples per surrogate batch (acg only); default
        /// derived from eps and n.
        #[arg(long)]
        mc_samples: Option<usize>,
    },
    /// Exhaustive optimum of a desk-scale instance.
    Brute {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that the sequence generators draw from the same law.
    VerifySequence {
        #[arg(long)]
        matroid: PathBuf,
        /// Draws per generator.
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Canned experiment suites.
    Bench {
        /// `scaling` (adaptive rounds vs n) or `hard-partition`
        /// (independence-oracle steps on the hidden-partition instance).
        #[arg(long)]
        suite: String,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidParameter(_)
        | Error::NotASingleMatroid
        | Error::GroundSetTooLarge { .. }
        | Error::ElementOutOfRange { .. }
        | Error::RankOracleRequired
        | Error::CoordinateOverflow { .. }
        | Error::Io(_) => 2,
        Error::OracleContract(_) | Error::EmptyBatch => 1,
    }
}

/// Entry point shared by the binary and the integration tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run {
            function,
            matroid,
            algo,
            eps,
            lambda,
            rho,
            trials,
            seed,
            out,
            delta,
            mc_samples,
        } => {
            let instance = parse_instance(&function, &matroid)?;
            let algo: Algo = algo.parse()?;
            if algo == Algo::Acg && !instance.constraint.build()?.is_single_matroid() {
                eprintln!(
                    "hint: matroid intersections are handled by the combinatorial optimizer; rerun with --algo aseq-pp"
                );
                return Err(Error::NotASingleMatroid);
            }
            let n = instance.ground_size();
            let k = constraint_rank(instance.constraint.build()?.as_ref());
            let lambda = lambda.unwrap_or(0.1);
            let delta = delta.unwrap_or_else(|| match algo {
                Algo::Acg => AlgoParams::default_delta_continuous(eps, lambda, k),
                _ => AlgoParams::default_delta_combinatorial(eps, k),
            });
            let mc = mc_samples.unwrap_or_else(|| AlgoParams::default_mc_samples(eps, n));
            let params = AlgoParams::new(eps, lambda, delta, rho.unwrap_or(20), seed, mc)?;
            let trials = trials.unwrap_or(1);
            let rows = run_experiment(&instance, algo, &params, trials)?;
            append_rows(&out, &rows)?;
            for row in &rows {
                if let OutputRow::Run(r) = row {
                    println!(
                        "{} n={} k={} seed={} value={:.6}{} rounds={} queries={} msteps={}",
                        r.algo,
                        r.n,
                        r.k,
                        r.seed,
                        r.value,
                        r.ratio.map_or(String::new(), |x| format!(" ratio={x:.4}")),
                        r.f_rounds,
                        r.f_queries,
                        r.m_steps
                    );
                }
            }
            println!("appended {} row(s) to {}", rows.len(), out.display());
            Ok(0)
        }
        Command::Brute { function, matroid, out } => {
            let instance = parse_instance(&function, &matroid)?;
            let params = AlgoParams::new(0.5, 1.0, 1, 1, 0, 1)?;
            let rows = run_experiment(&instance, Algo::Brute, &params, 1)?;
            if let OutputRow::Run(r) = &rows[0] {
                println!("optimum value {:.6} at n={} k={}", r.value, r.n, r.k);
            }
            append_rows(&out, &rows)?;
            Ok(0)
        }
        Command::VerifySequence { matroid, samples, seed } => {
            let text = std::fs::read_to_string(&matroid)?;
            let spec = ConstraintSpec::parse(&text)?;
            verify_sequence_cmd(&spec, samples, seed)
        }
        Command::Bench { suite, out, seed } => {
            let rows = match suite.as_str() {
                "scaling" => bench_scaling(seed)?,
                "hard-partition" => bench_hard_partition(seed)?,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown suite `{other}` (expected scaling or hard-partition)"
                    )))
                }
            };
            match out {
                Some(path) => {
                    append_rows(&path, &rows)?;
                    println!("appended {} row(s) to {}", rows.len(), path.display());
                }
                None => {
                    println!("{}", crate::harness::CSV_HEADER);
                    for row in &rows {
                        println!("{}", row.csv_line());
                    }
                }
            }
            Ok(0)
        }
    }
}

/// Draws sequences from every applicable generator and compares the full
/// empirical laws pairwise. Exit 0 when every pair passes at significance
/// 0.01, exit 1 otherwise.
fn verify_sequence_cmd(spec: &ConstraintSpec, samples: usize, seed: u64) -> Result<i32> {
    if samples < 100 {
        return Err(Error::InvalidParameter("need at least 100 samples".into()));
    }
    let oracle = spec.build()?;
    let n = oracle.ground_size();
    let universe: ElementSet = (0..n).collect();
    let contraction = ContractedMatroid::new(oracle.as_ref(), ElementSet::empty(), universe);

    let mut laws: Vec<(&str, BTreeMap<Vec<usize>, u64>)> = Vec::new();
    let mut steps: Vec<(&str, f64)> = Vec::new();
    let mut draw = |name: &'static str, which: u8, stream: u64| -> Result<()> {
        let mut rng = rng::run_rng(rng::derive_seed(seed, 0xBE9C, stream));
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let mut total_steps = 0u64;
        for _ in 0..samples {
            let mut ledger = QueryLedger::new();
            let s = match which {
                0 => random_sequence_sequential(&contraction, &mut rng, &mut ledger)?,
                1 => random_sequence_rank(&contraction, &mut rng, &mut ledger)?,
                _ => random_sequence_independence(&contraction, &mut rng, &mut ledger)?,
            };
            total_steps += s.m_steps;
            *counts.entry(s.order).or_default() += 1;
        }
        steps.push((name, total_steps as f64 / samples as f64));
        laws.push((name, counts));
        Ok(())
    };
    draw("sequential", 0, 0)?;
    if oracle.has_native_rank() {
        draw("rank", 1, 1)?;
    } else {
        println!("rank generator skipped: no native rank oracle");
    }
    draw("independence", 2, 2)?;

    let categories = laws.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    if categories > samples / 10 {
        return Err(Error::InvalidParameter(format!(
            "{categories} distinct sequences for {samples} samples; draw more samples or use a smaller matroid"
        )));
    }

    for (name, mean) in &steps {
        println!("{name:>12}: mean matroid steps per sequence {mean:.2}");
    }
    let mut all_pass = true;
    for i in 0..laws.len() {
        for j in (i + 1)..laws.len() {
            let p = crate::stats::chi_square_two_sample(&laws[i].1, &laws[j].1);
            let verdict = if p > 0.01 { "PASS" } else { "FAIL" };
            all_pass &= p > 0.01;
            println!(
                "{:>12} vs {:<12} chi-square p = {p:.4}  {verdict}",
                laws[i].0, laws[j].0
            );
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// Adaptive rounds of the threshold optimizer against greedy as n grows,
/// modular objectives under a fixed-rank uniform matroid.
fn bench_scaling(seed: u64) -> Result<Vec<OutputRow>> {
    use crate::functions::ModularFunction;
    use crate::matroids::UniformMatroid;
    use crate::maximize::{adaptive_sequencing, greedy};
    use rand::Rng;

    let k = 8usize;
    let eps = 0.1;
    let mut rows = Vec::new();
    for n in [1_000usize, 10_000] {
        let mut gen = rng::run_rng(rng::derive_seed(seed, 0x5CA1, n as u64));
        let weights: Vec<f64> = (0..n).map(|_| gen.random_range(0.5..10.0)).collect();
        let f = ModularFunction::new(weights)?;
        let m = UniformMatroid::new(n, k)?;
        let params = AlgoParams::combinatorial(eps, k, seed)?;

        type Runner<'a> = Box<dyn FnOnce() -> crate::core::Result<crate::maximize::SolutionReport> + 'a>;
        let runners: [(&str, Runner); 2] = [
            ("aseq", Box::new(|| adaptive_sequencing(&f, &m, &params))),
            ("greedy", Box::new(|| greedy(&f, &m))),
        ];
        for (name, run) in runners {
            let start = std::time::Instant::now();
            let report = run()?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(OutputRow::Run(ResultRow {
                algo: name.to_string(),
                n,
                k,
                epsilon: eps,
                lambda: None,
                rho: None,
                seed,
                value: report.value,
                opt: None,
                ratio: None,
                f_rounds: report.ledger.f_rounds,
                f_queries: report.ledger.f_queries,
                m_steps: report.ledger.m_steps,
                m_queries: report.ledger.m_queries,
                wall_ms,
            }));
        }
    }
    Ok(rows)
}

/// Steps of matroid queries on the hidden-partition instance: the
/// independence-oracle generator against the rank-oracle generator on the
/// unveiled equivalent.
fn bench_hard_partition(seed: u64) -> Result<Vec<OutputRow>> {
    let mut rows = Vec::new();
    let draws = 20;
    for n in [64usize, 256, 1024] {
        let hidden = HiddenPartitionInstance::hardness_preset(n, seed)?;
        let unveiled = hidden.unveil();
        let universe: ElementSet = (0..n).collect();

        let mut rng = rng::run_rng(rng::derive_seed(seed, 0xBADC, n as u64));
        for trial in 0..draws {
            let start = std::time::Instant::now();
            let mut ledger = QueryLedger::new();
            let contraction =
                ContractedMatroid::new(&hidden, ElementSet::empty(), universe.clone());
            let s = random_sequence_independence(&contraction, &mut rng, &mut ledger)?;
            rows.push(OutputRow::Run(ResultRow {
                algo: "seq-independence-hidden".into(),
                n,
                k: s.len(),
                epsilon: 0.0,
                lambda: None,
                rho: None,
                seed: seed.wrapping_add(trial),
                value: s.len() as f64,
                opt: None,
                ratio: None,
                f_rounds: 0,
                f_queries: 0,
                m_steps: ledger.m_steps,
                m_queries: ledger.m_queries,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            }));

            let start = std::time::Instant::now();
            let mut ledger = QueryLedger::new();
            let contraction =
                ContractedMatroid::new(&unveiled, ElementSet::empty(), universe.clone());
            let s = random_sequence_rank(&contraction, &mut rng, &mut ledger)?;
            rows.push(OutputRow::Run(ResultRow {
                algo: "seq-rank-unveiled".into(),
                n,
                k: s.len(),
                epsilon: 0.0,
                lambda: None,
                rho: None,
                seed: seed.wrapping_add(trial),
                value: s.len() as f64,
                opt: None,
                ratio: None,
                f_rounds: 0,
                f_queries: 0,
                m_steps: ledger.m_steps,
                m_queries: ledger.m_queries,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            }));
        }
    }
    Ok(rows)
}
