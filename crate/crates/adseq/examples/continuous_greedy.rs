//! The continuous optimizer end to end: build the fractional point with the
//! exact surrogate backend, round it back to a set with swap rounding, and
//! compare against greedy and the exhaustive optimum.
//!
//! ```text
//! cargo run --example continuous_greedy
//! ```

use adseq::continuous::{
    accelerated_continuous_greedy_with_backend, exact_multilinear, swap_round, SurrogateBackend,
};
use adseq::core::{rng, AlgoParams, QueryLedger, SubmodularOracle};
use adseq::functions::CoverageFunction;
use adseq::matroids::UniformMatroid;
use adseq::maximize::{brute_force, greedy};

fn main() -> adseq::Result<()> {
    let f = CoverageFunction::new(
        18,
        vec![
            vec![0, 1, 2],
            vec![2, 3],
            vec![4, 5, 6],
            vec![6, 7],
            vec![8, 9, 10],
            vec![10, 11],
            vec![12, 13],
            vec![13, 14, 15],
            vec![16, 17],
            vec![0, 4, 8, 12, 16],
        ],
    )?;
    let m = UniformMatroid::new(10, 3)?;
    let opt = brute_force(&f, &m)?;
    println!("exhaustive optimum: {}", opt.value);

    let params = AlgoParams::continuous(0.05, 0.25, 3, 10, 7)?;
    let acg =
        accelerated_continuous_greedy_with_backend(&f, &m, &params, SurrogateBackend::Exact)?;
    println!(
        "\nfractional point after {} steps of size {}:",
        acg.steps, params.lambda
    );
    for (e, &c) in acg.point.coords().iter().enumerate() {
        if c > 0.0 {
            println!("  x[{e}] = {c}");
        }
    }
    println!("expected value F(x) = {:.4}", exact_multilinear(&f, &acg.point)?);
    println!("per-step surrogate gains: {:?}", acg.gains);
    println!(
        "ledger: {} rounds, {} function queries, {} matroid steps",
        acg.ledger.f_rounds, acg.ledger.f_queries, acg.ledger.m_steps
    );

    // round a few times; rounding costs matroid queries but zero function
    // evaluations
    let mut round_rng = rng::run_rng(99);
    let mut ledger = QueryLedger::new();
    println!("\nswap roundings:");
    for _ in 0..5 {
        let s = swap_round(&acg.point, &m, &mut round_rng, &mut ledger)?;
        println!("  {:?} -> f = {}", s.as_slice(), f.eval(&s));
    }
    assert_eq!(ledger.f_queries, 0);

    let classic = greedy(&f, &m)?;
    println!("\ngreedy baseline: {} (ratio {:.3})", classic.value, classic.value / opt.value);
    Ok(())
}
