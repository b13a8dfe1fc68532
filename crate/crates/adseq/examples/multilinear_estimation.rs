//! Estimating the multilinear extension: the Monte Carlo estimator against
//! the exhaustive expectation and the closed forms, plus the point of
//! coupled sampling — comparisons between step marginals estimated from the
//! same draws are far less noisy than independently estimated ones.
//!
//! ```text
//! cargo run --example multilinear_estimation
//! ```

use adseq::continuous::exact_multilinear;
use adseq::core::{ElementSet, QueryLedger, SubmodularOracle};
use adseq::functions::{CoverageFunction, FractionalPoint, MultilinearEstimator};
use adseq::stats::mean_and_sample_std;

fn main() -> adseq::Result<()> {
    let f = CoverageFunction::new(
        12,
        vec![
            vec![0, 1, 2],
            vec![2, 3, 4],
            vec![4, 5],
            vec![6, 7, 8],
            vec![8, 9],
            vec![10, 11],
            vec![0, 6, 10],
            vec![3, 7, 11],
        ],
    )?;
    let x = FractionalPoint::from_rational_coords(&[2, 1, 3, 0, 2, 1, 3, 2], 4)?;

    let exact = exact_multilinear(&f, &x)?;
    let closed = f.multilinear_closed_form(x.coords()).unwrap();
    println!("exhaustive expectation F(x) = {exact:.6}");
    println!("closed form              = {closed:.6}");

    println!("\nMonte Carlo estimates (one adaptive round each):");
    for m in [100usize, 1_000, 10_000] {
        let est = MultilinearEstimator::new(m, 7)?;
        let mut ledger = QueryLedger::new();
        let reps = 50;
        let values: Vec<f64> = (0..reps)
            .map(|_| est.estimate(&f, &x, &mut ledger).unwrap())
            .collect();
        let (mean, std) = mean_and_sample_std(&values);
        println!(
            "  m = {m:>6}: mean {mean:.4}  spread {std:.4}  rounds {} queries {}",
            ledger.f_rounds, ledger.f_queries
        );
    }

    // diminishing returns under noise: the estimated marginal of an element
    // after a shorter prefix must stay at least the one after a longer
    // prefix, or the optimizer's nested survivor filters would tear. With
    // all four points estimated from the same draws the order is preserved
    // sample by sample; with independent draws it flips regularly.
    let lambda = 0.25;
    let a = 6usize;
    let short = ElementSet::from_elements(vec![2]);
    let long = ElementSet::from_elements(vec![2, 4]);
    let directions = [short.with(a), short.clone(), long.with(a), long.clone()];
    let reps = 300;
    let m = 200;

    let est = MultilinearEstimator::new(m, 11)?;
    let mut ledger = QueryLedger::new();
    let mut coupled_flips = 0;
    for _ in 0..reps {
        let g = est.step_marginals(&f, &x, lambda, &directions, &mut ledger)?;
        if (g[0] - g[1]) < (g[2] - g[3]) - 1e-12 {
            coupled_flips += 1;
        }
    }

    let mut independent_flips = 0;
    let mut gaps = Vec::with_capacity(reps);
    let singles: Vec<MultilinearEstimator> = (0..4)
        .map(|i| MultilinearEstimator::new(m, 20 + i).unwrap())
        .collect();
    for _ in 0..reps {
        let g: Vec<f64> = directions
            .iter()
            .zip(&singles)
            .map(|(t, e)| e.step_marginal(&f, &x, lambda, t, &mut ledger).unwrap())
            .collect();
        let gap = (g[0] - g[1]) - (g[2] - g[3]);
        gaps.push(gap);
        if gap < -1e-12 {
            independent_flips += 1;
        }
    }
    let (gap_mean, gap_std) = mean_and_sample_std(&gaps);

    println!(
        "\nmarginal of element {a} after {:?} vs after {:?} (true gap {gap_mean:+.3} ± {gap_std:.3}):",
        short.as_slice(),
        long.as_slice()
    );
    println!("  order flipped with coupled draws:     {coupled_flips}/{reps}");
    println!("  order flipped with independent draws: {independent_flips}/{reps}");
    println!("  shared uniforms preserve diminishing returns in every single sample.");
    Ok(())
}
