//! Threshold optimizers on a coverage instance under a partition matroid:
//! single-trial and best-of-rho runs against greedy and the exhaustive
//! optimum, with the full round/query ledger.
//!
//! ```text
//! cargo run --example adaptive_sequencing
//! ```

use adseq::core::AlgoParams;
use adseq::functions::CoverageFunction;
use adseq::matroids::PartitionMatroid;
use adseq::maximize::{adaptive_sequencing, adaptive_sequencing_pp, brute_force, greedy};

fn main() -> adseq::Result<()> {
    // 12 sensors, each covering a few of 20 zones; at most one sensor per
    // site group, two for the last group
    let f = CoverageFunction::new(
        20,
        vec![
            vec![0, 1, 2, 3],
            vec![2, 3, 4],
            vec![5, 6, 7, 8],
            vec![8, 9],
            vec![10, 11, 12],
            vec![12, 13, 14],
            vec![0, 5, 10, 15],
            vec![15, 16, 17],
            vec![17, 18, 19],
            vec![1, 6, 11, 16],
            vec![4, 9, 14, 19],
            vec![3, 8, 13, 18],
        ],
    )?;
    let m = PartitionMatroid::new(vec![0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3], vec![1, 1, 1, 2])?;

    let opt = brute_force(&f, &m)?;
    println!("exhaustive optimum: {} with {:?}", opt.value, opt.solution.as_slice());

    let params = AlgoParams::combinatorial(0.1, 5, 42)?;
    let single = adaptive_sequencing(&f, &m, &params)?;
    println!(
        "\nadaptive sequencing:    value {:>5.1} (ratio {:.3})  rounds {:>3}  f-queries {:>6}  m-steps {:>4}",
        single.value,
        single.value / opt.value,
        single.ledger.f_rounds,
        single.ledger.f_queries,
        single.ledger.m_steps,
    );

    let mut pp_params = params.clone();
    pp_params.rho = 12;
    let pp = adaptive_sequencing_pp(&f, &m, &pp_params)?;
    println!(
        "best-of-{:<2} trials:      value {:>5.1} (ratio {:.3})  rounds {:>3}  f-queries {:>6}  m-steps {:>4}",
        pp_params.rho,
        pp.value,
        pp.value / opt.value,
        pp.ledger.f_rounds,
        pp.ledger.f_queries,
        pp.ledger.m_steps,
    );

    let classic = greedy(&f, &m)?;
    println!(
        "greedy baseline:        value {:>5.1} (ratio {:.3})  rounds {:>3}  f-queries {:>6}  m-steps {:>4}",
        classic.value,
        classic.value / opt.value,
        classic.ledger.f_rounds,
        classic.ledger.f_queries,
        classic.ledger.m_steps,
    );

    println!("\nper-iteration trace of the best-of-trials run:");
    println!("{:>5} {:>10} {:>6} {:>6} {:>6} {:>6}", "outer", "t", "|X|", "i*", "added", "|X'|");
    for row in pp.trace.iter().take(12) {
        println!(
            "{:>5} {:>10.4} {:>6} {:>6} {:>6} {:>6}",
            row.outer_iteration,
            row.threshold,
            row.survivors_before,
            row.i_star,
            row.prefix_added,
            row.survivors_after
        );
    }
    if pp.trace.len() > 12 {
        println!("  ... {} more iterations", pp.trace.len() - 12);
    }
    Ok(())
}
