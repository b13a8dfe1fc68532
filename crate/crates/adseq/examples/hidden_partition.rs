//! The hidden-partition adversary: a partition matroid whose parts are a
//! secret random equipartition. With independence queries only, building a
//! base costs a number of sequential steps that grows with n; unveiling the
//! partition and asking rank queries collapses it to a single step.
//!
//! ```text
//! cargo run --example hidden_partition
//! ```

use adseq::core::{rng, ElementSet, MatroidOracle, QueryLedger};
use adseq::matroids::{ContractedMatroid, HiddenPartitionInstance};
use adseq::sequencing::{random_sequence_independence, random_sequence_rank};

fn main() -> adseq::Result<()> {
    println!(
        "{:>6} {:>6} {:>7} {:>12} {:>14} {:>12}",
        "n", "parts", "slope", "indep steps", "6*sqrt(n)", "rank steps"
    );
    for n in [64usize, 256, 1024] {
        let hidden = HiddenPartitionInstance::hardness_preset(n, 3)?;
        let unveiled = hidden.unveil();
        assert!(!hidden.has_native_rank(), "the partition must stay hidden");

        let universe: ElementSet = (0..n).collect();
        let mut rng = rng::run_rng(n as u64);
        let draws = 25;

        let mut indep_steps = 0u64;
        for _ in 0..draws {
            let mut ledger = QueryLedger::new();
            let c = ContractedMatroid::new(&hidden, ElementSet::empty(), universe.clone());
            let s = random_sequence_independence(&c, &mut rng, &mut ledger)?;
            assert!(hidden.is_independent(&ElementSet::from_elements(s.order.clone())));
            indep_steps += s.m_steps;
        }

        let mut rank_steps = 0u64;
        for _ in 0..draws {
            let mut ledger = QueryLedger::new();
            let c = ContractedMatroid::new(&unveiled, ElementSet::empty(), universe.clone());
            let s = random_sequence_rank(&c, &mut rng, &mut ledger)?;
            rank_steps += s.m_steps;
        }

        println!(
            "{:>6} {:>6} {:>7} {:>12.1} {:>14.1} {:>12.1}",
            n,
            hidden.parts(),
            hidden.slope(),
            indep_steps as f64 / draws as f64,
            6.0 * (n as f64).sqrt(),
            rank_steps as f64 / draws as f64,
        );
    }
    Ok(())
}
