//! The three random feasible-sequence generators side by side: identical
//! output law, very different matroid-step costs.
//!
//! ```text
//! cargo run --example sequence_generators
//! ```

use std::collections::BTreeMap;

use adseq::core::{rng, ElementSet, QueryLedger};
use adseq::matroids::{ContractedMatroid, PartitionMatroid};
use adseq::sequencing::{
    random_sequence_independence, random_sequence_rank, random_sequence_sequential,
    FeasibleSequence,
};
use adseq::stats::{chi_square_two_sample, total_variation};

type Generator<'a> = Box<dyn FnMut(&mut QueryLedger) -> adseq::Result<FeasibleSequence> + 'a>;

fn main() -> adseq::Result<()> {
    let m = PartitionMatroid::new(vec![0, 0, 1, 1, 2, 2], vec![1, 1, 1])?;
    let universe: ElementSet = (0..6).collect();
    let contraction = ContractedMatroid::new(&m, ElementSet::empty(), universe);

    let draws = 20_000;
    let collect = |name: &str, mut gen: Generator<'_>|
     -> adseq::Result<(BTreeMap<Vec<usize>, u64>, f64)> {
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let mut steps = 0u64;
        for _ in 0..draws {
            let mut ledger = QueryLedger::new();
            let s = gen(&mut ledger)?;
            steps += s.m_steps;
            *counts.entry(s.order).or_default() += 1;
        }
        let mean_steps = steps as f64 / draws as f64;
        println!(
            "{name:>12}: {} distinct sequences, mean matroid steps {mean_steps:.2}",
            counts.len()
        );
        Ok((counts, mean_steps))
    };

    let mut r1 = rng::run_rng(1);
    let c = &contraction;
    let (sequential, _) = collect(
        "sequential",
        Box::new(move |l| random_sequence_sequential(c, &mut r1, l)),
    )?;
    let mut r2 = rng::run_rng(2);
    let (rank, rank_steps) = collect(
        "rank",
        Box::new(move |l| random_sequence_rank(c, &mut r2, l)),
    )?;
    let mut r3 = rng::run_rng(3);
    let (independence, _) = collect(
        "independence",
        Box::new(move |l| random_sequence_independence(c, &mut r3, l)),
    )?;
    assert_eq!(rank_steps, 1.0);

    println!("\npairwise law comparison over full sequences ({draws} draws):");
    for (a_name, a, b_name, b) in [
        ("sequential", &sequential, "rank", &rank),
        ("sequential", &sequential, "independence", &independence),
        ("rank", &rank, "independence", &independence),
    ] {
        println!(
            "  {a_name:>12} vs {b_name:<12}  chi-square p = {:.4}   total variation = {:.4}",
            chi_square_two_sample(a, b),
            total_variation(a, b)
        );
    }
    Ok(())
}
