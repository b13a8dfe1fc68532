//! The file formats and the experiment runner: write an instance to disk,
//! parse it back, run three algorithms, and print the CSV rows the `adseq`
//! binary would append.
//!
//! ```text
//! cargo run --example instance_files
//! ```

use adseq::core::AlgoParams;
use adseq::harness::{
    parse_instance, run_experiment, Algo, ConstraintSpec, FunctionSpec, InstanceSpec, CSV_HEADER,
};

fn main() -> adseq::Result<()> {
    let function = FunctionSpec::Coverage {
        universe: 8,
        covers: vec![
            vec![0, 1],
            vec![1, 2, 3],
            vec![3, 4],
            vec![5],
            vec![5, 6, 7],
            vec![0, 7],
        ],
    };
    let constraint = ConstraintSpec::Partition {
        part_of: vec![0, 0, 1, 1, 2, 2],
        capacities: vec![1, 1, 1],
    };

    println!("--- function file ---\n{}", function.serialize());
    println!("--- matroid file ---\n{}", constraint.serialize());

    // round-trip through the on-disk representation
    let dir = std::env::temp_dir().join("adseq-instance-files-example");
    std::fs::create_dir_all(&dir)?;
    let fpath = dir.join("function.txt");
    let mpath = dir.join("matroid.txt");
    std::fs::write(&fpath, function.serialize())?;
    std::fs::write(&mpath, constraint.serialize())?;
    let instance = parse_instance(&fpath, &mpath)?;
    assert_eq!(instance, InstanceSpec::new(function, constraint)?);
    println!("parsed {} elements from {}", instance.ground_size(), dir.display());

    let params = AlgoParams::new(0.1, 0.25, 24, 10, 11, 400)?;
    println!("\n{CSV_HEADER}");
    for algo in [Algo::AseqPp, Algo::Greedy, Algo::Brute] {
        for row in run_experiment(&instance, algo, &params, 1)? {
            println!("{}", row.csv_line());
        }
    }
    Ok(())
}
