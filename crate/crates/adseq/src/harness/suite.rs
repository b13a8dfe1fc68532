//! Fixed seeded instance suites for verification: everything is derived from
//! hard-coded master seeds, so every checkout sees the same instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::core::rng::substream;
use crate::harness::formats::{ConstraintSpec, FunctionSpec, InstanceSpec};

const STANDARD_MASTER: u64 = 0x05EE_D501;
const INTERSECTION_MASTER: u64 = 0x05EE_D302;

/// A named desk-scale instance.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: String,
    pub spec: InstanceSpec,
}

fn random_modular(rng: &mut ChaCha8Rng, n: usize) -> FunctionSpec {
    FunctionSpec::Modular {
        weights: (0..n).map(|_| rng.random_range(0.5..10.0)).collect(),
    }
}

fn random_coverage(rng: &mut ChaCha8Rng, n: usize) -> FunctionSpec {
    let universe = rng.random_range(10..=24);
    FunctionSpec::Coverage {
        universe,
        covers: (0..n)
            .map(|_| {
                let c = rng.random_range(1..=4);
                (0..c).map(|_| rng.random_range(0..universe)).collect()
            })
            .collect(),
    }
}

/// Partition matroid of rank at most 4: up to four parts, one of which may
/// take two elements.
fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> ConstraintSpec {
    let parts = rng.random_range(2..=4usize);
    let mut capacities = vec![1usize; parts];
    if parts <= 3 {
        capacities[rng.random_range(0..parts)] = 2;
    }
    ConstraintSpec::Partition {
        part_of: (0..n).map(|_| rng.random_range(0..parts)).collect(),
        capacities,
    }
}

/// Graphic matroid on at most five vertices (rank at most 4), `n` random
/// edges.
fn random_graphic(rng: &mut ChaCha8Rng, n: usize) -> ConstraintSpec {
    let vertices = rng.random_range(3..=5usize);
    ConstraintSpec::Graphic {
        vertices,
        edges: (0..n)
            .map(|_| {
                let u = rng.random_range(0..vertices);
                let mut v = rng.random_range(0..vertices);
                while v == u {
                    v = rng.random_range(0..vertices);
                }
                (u, v)
            })
            .collect(),
    }
}

/// Fifty seeded instances, `n <= 14`, rank at most 4, alternating modular and
/// coverage objectives over uniform, partition and graphic matroids.
pub fn standard_suite() -> Vec<SuiteInstance> {
    (0..50)
        .map(|i| {
            let mut rng = substream(STANDARD_MASTER, i as u64, 0);
            let n = rng.random_range(8..=14);
            let function = if i % 2 == 0 {
                random_modular(&mut rng, n)
            } else {
                random_coverage(&mut rng, n)
            };
            let (constraint, mk) = match i % 3 {
                0 => (
                    ConstraintSpec::Uniform {
                        n,
                        k: rng.random_range(1..=4),
                    },
                    "uniform",
                ),
                1 => (random_partition(&mut rng, n), "partition"),
                _ => (random_graphic(&mut rng, n), "graphic"),
            };
            let fk = if i % 2 == 0 { "modular" } else { "coverage" };
            SuiteInstance {
                name: format!("std{i:02}-{fk}-{mk}-n{n}"),
                spec: InstanceSpec::new(function, constraint).expect("suite instance is valid"),
            }
        })
        .collect()
}

/// Thirty seeded instances constrained by the intersection of two partition
/// matroids, `n <= 12`.
pub fn intersection_suite() -> Vec<SuiteInstance> {
    (0..30)
        .map(|i| {
            let mut rng = substream(INTERSECTION_MASTER, i as u64, 0);
            let n = rng.random_range(8..=12);
            let function = if i % 2 == 0 {
                random_modular(&mut rng, n)
            } else {
                random_coverage(&mut rng, n)
            };
            let parts = |rng: &mut ChaCha8Rng| {
                let p = rng.random_range(2..=3usize);
                ConstraintSpec::Partition {
                    part_of: (0..n).map(|_| rng.random_range(0..p)).collect(),
                    capacities: (0..p).map(|_| rng.random_range(1..=2)).collect(),
                }
            };
            let constraint = ConstraintSpec::Intersect(vec![parts(&mut rng), parts(&mut rng)]);
            let fk = if i % 2 == 0 { "modular" } else { "coverage" };
            SuiteInstance {
                name: format!("ix{i:02}-{fk}-n{n}"),
                spec: InstanceSpec::new(function, constraint).expect("suite instance is valid"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroids::rank_uncounted;

    #[test]
    fn standard_suite_is_deterministic_and_in_bounds() {
        let a = standard_suite();
        let b = standard_suite();
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.spec, y.spec);
        }
        for inst in &a {
            let n = inst.spec.ground_size();
            assert!((8..=14).contains(&n), "{}", inst.name);
            let m = inst.spec.constraint.build().unwrap();
            let full: crate::core::ElementSet = (0..n).collect();
            assert!(rank_uncounted(m.as_ref(), &full) <= 4, "{}", inst.name);
        }
    }

    #[test]
    fn intersection_suite_is_deterministic_and_in_bounds() {
        let a = intersection_suite();
        assert_eq!(a.len(), 30);
        for inst in &a {
            assert!(inst.spec.ground_size() <= 12);
            let m = inst.spec.constraint.build().unwrap();
            assert!(!m.is_single_matroid());
        }
    }
}
