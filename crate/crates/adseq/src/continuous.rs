//! Continuous optimization over the multilinear extension: a constant number
//! of threshold-optimizer calls on a step surrogate, followed by swap
//! rounding of the fractional point back to a feasible set.

use num_rational::Ratio;
use rand::Rng;

use crate::core::{
    batch_independent, rng, AlgoParams, Element, ElementSet, Error, MatroidOracle, QueryLedger,
    Result, RoundCounter, SubmodularOracle,
};
use crate::functions::{bumped_set, include_set, sample_uniforms, ComboWeight, FractionalPoint};
use crate::matroids::{ContractedMatroid, TruncatedMatroid};
use crate::maximize::{run_threshold_engine, EngineOptions};
use crate::sequencing::random_sequence_sequential;

/// Ground sets above this size cannot be handled by exhaustive expectation.
pub const EXACT_EXPECTATION_MAX_N: usize = 20;

/// How the step surrogate answers value queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurrogateBackend {
    /// Exact expectations: closed form when the oracle has one, exhaustive
    /// enumeration (desk scale) otherwise.
    Exact,
    /// Coupled Monte Carlo estimates with this many samples per batch.
    Estimated { samples: usize },
}

/// The surrogate `g(T) = F(x + lambda*1_T) - F(x)`: the gain of a step of
/// size `lambda` in the direction of `T`. Monotone and submodular whenever
/// `f` is, so the threshold optimizer can run on it directly.
///
/// With the estimated backend, each batch draws fresh coupled samples (one
/// uniform per element per sample, reused across every evaluated point, with
/// antithetic pairing). Within a batch the estimates therefore preserve the
/// pointwise dominance relations of `f`, which keeps survivor chains nested
/// even under sampling noise.
pub struct StepSurrogate<'a> {
    f: &'a dyn SubmodularOracle,
    coords: Vec<f64>,
    lambda: f64,
    backend: SurrogateBackend,
    seed: u64,
    round: RoundCounter,
    base_value: f64,
}

impl<'a> StepSurrogate<'a> {
    /// The exact backend evaluates `F(x)` once at construction, charged to
    /// the ledger as its own round; the estimated backend never needs it
    /// (it cancels inside every coupled marginal).
    pub fn new(
        f: &'a dyn SubmodularOracle,
        x: &FractionalPoint,
        lambda: f64,
        backend: SurrogateBackend,
        seed: u64,
        ledger: &mut QueryLedger,
    ) -> Result<Self> {
        if x.ground_size() != f.ground_size() {
            return Err(Error::InvalidParameter(
                "point and function disagree on the ground set".into(),
            ));
        }
        if let SurrogateBackend::Estimated { samples } = backend {
            if samples == 0 {
                return Err(Error::InvalidParameter("need at least one sample".into()));
            }
        }
        if backend == SurrogateBackend::Exact
            && f.multilinear_closed_form(x.coords()).is_none()
            && f.ground_size() > EXACT_EXPECTATION_MAX_N
        {
            return Err(Error::GroundSetTooLarge {
                n: f.ground_size(),
                cap: EXACT_EXPECTATION_MAX_N,
                what: "exact expectation surrogate",
            });
        }
        let base_value = match backend {
            SurrogateBackend::Exact => {
                let v = exact_extension_value(f, x.coords());
                ledger.charge_f_round(1);
                v
            }
            SurrogateBackend::Estimated { .. } => f64::NAN,
        };
        Ok(Self {
            f,
            coords: x.coords().to_vec(),
            lambda,
            backend,
            seed,
            round: RoundCounter::new(),
            base_value,
        })
    }
}

impl SubmodularOracle for StepSurrogate<'_> {
    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    fn eval(&self, set: &ElementSet) -> f64 {
        self.eval_batch(std::slice::from_ref(set))[0]
    }

    fn eval_batch(&self, queries: &[ElementSet]) -> Vec<f64> {
        match self.backend {
            SurrogateBackend::Exact => queries
                .iter()
                .map(|t| {
                    let mut y = self.coords.clone();
                    for e in t {
                        y[e] = (y[e] + self.lambda).min(1.0);
                    }
                    exact_extension_value(self.f, &y) - self.base_value
                })
                .collect(),
            SurrogateBackend::Estimated { samples } => {
                let round = self.round.next();
                let n = self.coords.len();
                let uniforms: Vec<Vec<f64>> = (0..samples)
                    .map(|j| sample_uniforms(n, self.seed, round, j as u64))
                    .collect();
                let bases: Vec<ElementSet> = uniforms
                    .iter()
                    .map(|u| include_set(u, &self.coords))
                    .collect();
                let mut f_queries = bases.clone();
                for t in queries {
                    for (j, u) in uniforms.iter().enumerate() {
                        f_queries.push(bumped_set(&bases[j], u, &self.coords, self.lambda, t));
                    }
                }
                let values = self.f.eval_batch(&f_queries);
                (0..queries.len())
                    .map(|ti| {
                        let offset = samples * (ti + 1);
                        (0..samples)
                            .map(|j| values[offset + j] - values[j])
                            .sum::<f64>()
                            / samples as f64
                    })
                    .collect()
            }
        }
    }

    fn batch_cost(&self, batch_len: usize) -> u64 {
        match self.backend {
            SurrogateBackend::Exact => batch_len as u64,
            SurrogateBackend::Estimated { samples } => (samples * (batch_len + 1)) as u64,
        }
    }
}

/// State of the continuous run: the fractional point as an exact convex
/// combination of the chosen sets, one per step, plus the measured surrogate
/// gain of each step.
#[derive(Debug)]
pub struct AcgState {
    pub point: FractionalPoint,
    pub chosen: Vec<ElementSet>,
    pub gains: Vec<f64>,
    pub ledger: QueryLedger,
    pub steps: usize,
}

/// Continuous optimizer with estimated surrogates, the production
/// configuration. `params.mc_samples` sets the per-batch sample budget.
pub fn accelerated_continuous_greedy(
    f: &dyn SubmodularOracle,
    matroid: &dyn MatroidOracle,
    params: &AlgoParams,
) -> Result<AcgState> {
    accelerated_continuous_greedy_with_backend(
        f,
        matroid,
        params,
        SurrogateBackend::Estimated {
            samples: params.mc_samples,
        },
    )
}

/// Continuous optimizer: `1/lambda` iterations, each building the step
/// surrogate at the current point and handing it to the threshold optimizer
/// to pick the direction. Requires a genuine matroid; the guarantee leans on
/// the exchange property, so intersections are refused.
pub fn accelerated_continuous_greedy_with_backend(
    f: &dyn SubmodularOracle,
    matroid: &dyn MatroidOracle,
    params: &AlgoParams,
    backend: SurrogateBackend,
) -> Result<AcgState> {
    if !matroid.is_single_matroid() {
        return Err(Error::NotASingleMatroid);
    }
    let n = f.ground_size();
    if n == 0 || n != matroid.ground_size() {
        return Err(Error::InvalidParameter(
            "function and constraint must share a nonempty ground set".into(),
        ));
    }
    let q = params.lambda_inverse();
    if !(params.lambda > 0.0 && params.lambda <= 1.0)
        || (1.0 / params.lambda - q as f64).abs() > 1e-9
    {
        return Err(Error::InvalidParameter(format!(
            "1/lambda must be an integer, got lambda = {}",
            params.lambda
        )));
    }
    let mut ledger = QueryLedger::new();
    let mut chosen: Vec<ElementSet> = Vec::with_capacity(q);
    let mut gains: Vec<f64> = Vec::with_capacity(q);

    for step in 0..q {
        // the point is rebuilt from the chosen sets each iteration, so the
        // convex combination can never drift
        let point = FractionalPoint::uniform_combination(n, q, &chosen)?;
        let surrogate = StepSurrogate::new(
            f,
            &point,
            params.lambda,
            backend,
            rng::derive_seed(params.seed, 0xACC5, step as u64),
            &mut ledger,
        )?;
        let step_params = params.with_seed(rng::derive_seed(params.seed, 0xD12E, step as u64));
        let out = run_threshold_engine(
            &surrogate,
            matroid,
            &step_params,
            &EngineOptions::default(),
            &mut ledger,
            None,
        )?;
        gains.push(out.value);
        chosen.push(out.solution);
    }

    let point = FractionalPoint::uniform_combination(n, q, &chosen)?;
    Ok(AcgState {
        point,
        chosen,
        gains,
        ledger,
        steps: q,
    })
}

/// Rounds a convex combination of independent sets to a single independent
/// set by pairwise base exchanges, without a single function evaluation.
///
/// Each combination set is first completed to a base of the matroid
/// truncated at the largest combination-set size (sequential random feasible
/// completion, matroid queries only). Bases are then merged pairwise: repeat
/// picking the lowest-index element of the accumulator outside the other
/// base, finding the first partner for which both single swaps stay
/// independent, and keeping one side with probability proportional to its
/// weight. When the combination weights sum to 1 and all sets share a size,
/// every element ends up in the output with probability exactly its
/// coordinate.
pub fn swap_round<R: Rng>(
    x: &FractionalPoint,
    matroid: &dyn MatroidOracle,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<ElementSet> {
    let (f_rounds_before, f_queries_before) = (ledger.f_rounds, ledger.f_queries);
    let terms: Vec<(ComboWeight, ElementSet)> = x
        .terms()
        .iter()
        .filter(|(_, s)| !s.is_empty())
        .cloned()
        .collect();
    if terms.is_empty() {
        return Ok(ElementSet::empty());
    }

    // reject combinations whose sets are not independent
    let sets: Vec<ElementSet> = terms.iter().map(|(_, s)| s.clone()).collect();
    let verdicts = batch_independent(matroid, &sets, ledger)?;
    if let Some(idx) = verdicts.iter().position(|ok| !ok) {
        return Err(Error::InvalidParameter(format!(
            "combination set {:?} is not independent",
            terms[idx].1
        )));
    }

    let r_star = terms.iter().map(|(_, s)| s.len()).max().unwrap();
    let truncated = TruncatedMatroid::new(matroid, r_star);

    // completion to bases of the truncation, matroid queries only
    let mut bases: Vec<(ComboWeight, ElementSet)> = Vec::with_capacity(terms.len());
    let ground: ElementSet = (0..matroid.ground_size()).collect();
    for (w, s) in terms {
        let mut b = s.clone();
        if b.len() < r_star {
            let contraction =
                ContractedMatroid::new(&truncated, s.clone(), ground.difference(&s));
            let completion = random_sequence_sequential(&contraction, rng, ledger)?;
            for a in completion.order {
                b.insert(a);
            }
        }
        if b.len() != r_star {
            return Err(Error::OracleContract(format!(
                "completion reached size {} instead of {r_star}",
                b.len()
            )));
        }
        bases.push((w, b));
    }

    // pairwise merge
    let mut bases = bases.into_iter();
    let (mut acc_weight, mut acc) = bases.next().expect("nonempty");
    for (weight, mut other) in bases {
        loop {
            let moving = acc.difference(&other);
            let Some(e) = moving.iter().next() else {
                break; // acc == other
            };
            let partners: Vec<Element> = other.difference(&acc).to_vec();
            // both directions of every candidate swap, one parallel step
            let mut queries: Vec<ElementSet> = Vec::with_capacity(2 * partners.len());
            for &p in &partners {
                queries.push(acc.without(e).with(p));
                queries.push(other.without(p).with(e));
            }
            let verdicts = batch_independent(&truncated, &queries, ledger)?;
            let valid = partners
                .iter()
                .enumerate()
                .find(|(i, _)| verdicts[2 * i] && verdicts[2 * i + 1])
                .map(|(_, &p)| p);
            let Some(partner) = valid else {
                return Err(Error::OracleContract(
                    "no valid exchange pair between two bases".into(),
                ));
            };
            let p_keep_acc = ratio_to_f64(acc_weight) / ratio_to_f64(acc_weight + weight);
            if rng.random::<f64>() < p_keep_acc {
                other.remove(partner);
                other.insert(e);
            } else {
                acc.remove(e);
                acc.insert(partner);
            }
        }
        acc_weight += weight;
    }

    debug_assert_eq!(ledger.f_rounds, f_rounds_before);
    debug_assert_eq!(ledger.f_queries, f_queries_before);
    Ok(acc)
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact multilinear extension value by exhaustive expectation: every subset
/// of the fractional support, weighted by its product probability. The test
/// oracle against which both closed forms and the Monte Carlo estimator are
/// checked, so it deliberately never consults [`SubmodularOracle::multilinear_closed_form`].
pub fn exact_multilinear(f: &dyn SubmodularOracle, x: &FractionalPoint) -> Result<f64> {
    let n = f.ground_size();
    if n > EXACT_EXPECTATION_MAX_N {
        return Err(Error::GroundSetTooLarge {
            n,
            cap: EXACT_EXPECTATION_MAX_N,
            what: "exact expectation",
        });
    }
    if x.ground_size() != n {
        return Err(Error::InvalidParameter(
            "point and function disagree on the ground set".into(),
        ));
    }
    Ok(enumerate_extension_value(f, x.coords()))
}

/// Fast path for the exact surrogate backend: the oracle's closed form when
/// it has one, exhaustive expectation otherwise.
fn exact_extension_value(f: &dyn SubmodularOracle, coords: &[f64]) -> f64 {
    if let Some(v) = f.multilinear_closed_form(coords) {
        return v;
    }
    enumerate_extension_value(f, coords)
}

fn enumerate_extension_value(f: &dyn SubmodularOracle, coords: &[f64]) -> f64 {
    let always: Vec<Element> = (0..coords.len()).filter(|&e| coords[e] >= 1.0).collect();
    let fractional: Vec<Element> = (0..coords.len())
        .filter(|&e| coords[e] > 0.0 && coords[e] < 1.0)
        .collect();
    assert!(
        fractional.len() <= EXACT_EXPECTATION_MAX_N,
        "support too large for exhaustive expectation"
    );
    let mut total = 0.0;
    for mask in 0u64..(1 << fractional.len()) {
        let mut weight = 1.0;
        let mut members = always.clone();
        for (bit, &e) in fractional.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                weight *= coords[e];
                members.push(e);
            } else {
                weight *= 1.0 - coords[e];
            }
        }
        total += weight * f.eval(&ElementSet::from_elements(members));
    }
    total
}

/// Spot check of polytope membership: for sampled subsets `T`, the coordinate
/// mass inside `T` must not exceed the rank of `T`. A tripwire, since the
/// convex-combination representation guarantees it by construction.
pub fn polytope_membership_spot_check<R: Rng>(
    x: &FractionalPoint,
    matroid: &dyn MatroidOracle,
    samples: usize,
    rng: &mut R,
) -> Result<()> {
    let n = x.ground_size();
    for _ in 0..samples {
        let t: ElementSet = (0..n).filter(|_| rng.random::<bool>()).collect();
        let mass: ComboWeight = t
            .iter()
            .map(|e| x.rational_coord(e))
            .fold(ComboWeight::new(0, 1), |acc, w| acc + w);
        let rank = crate::matroids::rank_uncounted(matroid, &t);
        if mass > ComboWeight::new(rank as u64, 1) {
            return Err(Error::OracleContract(format!(
                "coordinate mass {mass} exceeds rank {rank} on {t:?}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{CoverageFunction, ModularFunction};
    use crate::matroids::{IntersectionConstraint, PartitionMatroid, UniformMatroid};
    use crate::maximize::brute_force;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    fn rand_modular(rng: &mut ChaCha8Rng, n: usize) -> ModularFunction {
        ModularFunction::new((0..n).map(|_| rng.random_range(0.5..10.0)).collect()).unwrap()
    }

    fn rand_coverage(rng: &mut ChaCha8Rng, n: usize, universe: usize) -> CoverageFunction {
        let covers = (0..n)
            .map(|_| {
                let k = rng.random_range(1..=4);
                (0..k).map(|_| rng.random_range(0..universe)).collect()
            })
            .collect();
        CoverageFunction::new(universe, covers).unwrap()
    }

    /// Convex combination of equal-size bases of a 3-part partition matroid,
    /// weights summing to one: swap rounding preserves marginals exactly.
    fn base_combination() -> (PartitionMatroid, FractionalPoint) {
        let m = PartitionMatroid::new(vec![0, 0, 1, 1, 2, 2], vec![1, 1, 1]).unwrap();
        let quarter = ComboWeight::new(1, 4);
        let x = FractionalPoint::from_terms(
            6,
            vec![
                (quarter, ElementSet::from_elements(vec![0, 2, 4])),
                (quarter, ElementSet::from_elements(vec![1, 3, 5])),
                (quarter, ElementSet::from_elements(vec![0, 3, 4])),
                (quarter, ElementSet::from_elements(vec![1, 2, 5])),
            ],
        )
        .unwrap();
        (m, x)
    }

    #[test]
    fn exact_expectation_examples() {
        let f = ModularFunction::new(vec![1.0, 2.0, 4.0]).unwrap();
        // integral coordinates: the value of the support
        let x = FractionalPoint::indicator(3, ElementSet::from_elements(vec![0, 2])).unwrap();
        assert_eq!(exact_multilinear(&f, &x).unwrap(), 5.0);
        // modular: sum of coordinate-weighted weights
        let x = FractionalPoint::from_rational_coords(&[1, 2, 3], 4).unwrap();
        assert!((exact_multilinear(&f, &x).unwrap() - (0.25 + 1.0 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn exact_expectation_respects_the_ground_set_cap() {
        struct Opaque(usize);
        impl SubmodularOracle for Opaque {
            fn ground_size(&self) -> usize {
                self.0
            }
            fn eval(&self, s: &ElementSet) -> f64 {
                s.len() as f64
            }
        }
        let x = FractionalPoint::zero(21);
        assert!(matches!(
            exact_multilinear(&Opaque(21), &x),
            Err(Error::GroundSetTooLarge { .. })
        ));
    }

    #[test]
    fn estimator_tracks_exact_expectation_within_a_percent() {
        let mut gen = crate::core::rng::run_rng(71);
        let f = rand_coverage(&mut gen, 10, 20);
        let x = FractionalPoint::from_rational_coords(&[3, 1, 2, 4, 0, 2, 1, 3, 2, 1], 4).unwrap();
        let exact = exact_multilinear(&f, &x).unwrap();
        let est = crate::functions::MultilinearEstimator::new(100_000, 5).unwrap();
        let mut ledger = QueryLedger::new();
        let v = est.estimate(&f, &x, &mut ledger).unwrap();
        assert!(
            (v - exact).abs() <= 0.01 * exact.abs().max(1.0),
            "estimate {v} vs exact {exact}"
        );
    }

    #[test]
    fn surrogate_backends_agree_in_expectation() {
        let mut gen = crate::core::rng::run_rng(72);
        let f = rand_coverage(&mut gen, 8, 15);
        let x = FractionalPoint::from_rational_coords(&[1, 0, 2, 1, 0, 3, 1, 2], 4).unwrap();
        let t = ElementSet::from_elements(vec![0, 1, 4]);
        let mut ledger = QueryLedger::new();
        let exact =
            StepSurrogate::new(&f, &x, 0.25, SurrogateBackend::Exact, 0, &mut ledger).unwrap();
        let want = exact.eval(&t);
        // mean of many estimated evaluations approaches the exact value
        let est = StepSurrogate::new(
            &f,
            &x,
            0.25,
            SurrogateBackend::Estimated { samples: 400 },
            9,
            &mut ledger,
        )
        .unwrap();
        let reps = 200;
        let mean: f64 = (0..reps).map(|_| est.eval(&t)).sum::<f64>() / reps as f64;
        assert!(
            (mean - want).abs() < 0.05 * want.abs().max(1.0),
            "estimated mean {mean} vs exact {want}"
        );
    }

    #[test]
    fn acg_reaches_near_optimal_value_on_modular_uniform_suite() {
        // modular objectives make the surrogate additive, so the continuous
        // run must land at (essentially) the top-k optimum
        let mut gen = crate::core::rng::run_rng(73);
        let mut failures = 0;
        for inst in 0..50u64 {
            let n = gen.random_range(6..=14);
            let k = gen.random_range(1..=4usize);
            let f = rand_modular(&mut gen, n);
            let m = UniformMatroid::new(n, k).unwrap();
            let opt = brute_force(&f, &m).unwrap().value;
            let params = AlgoParams::continuous(0.05, 0.25, k, n, 500 + inst).unwrap();
            let acg = accelerated_continuous_greedy_with_backend(
                &f,
                &m,
                &params,
                SurrogateBackend::Exact,
            )
            .unwrap();
            let mut rng = crate::core::rng::run_rng(inst);
            let mut ledger = acg.ledger.clone();
            let rounded = swap_round(&acg.point, &m, &mut rng, &mut ledger).unwrap();
            assert!(m.is_independent(&rounded));
            let value = f.eval(&rounded);
            if value < (1.0 - 1.0 / std::f64::consts::E - 0.15) * opt {
                failures += 1;
            }
        }
        assert_eq!(failures, 0, "{failures} instances below the floor");
    }

    #[test]
    fn acg_on_rank_zero_matroid_returns_the_origin() {
        let f = ModularFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        let m = UniformMatroid::new(3, 0).unwrap();
        let params = AlgoParams::continuous(0.1, 0.25, 1, 3, 0).unwrap();
        let acg =
            accelerated_continuous_greedy_with_backend(&f, &m, &params, SurrogateBackend::Exact)
                .unwrap();
        assert!(acg.point.coords().iter().all(|&c| c == 0.0));
        let mut rng = crate::core::rng::run_rng(0);
        let mut ledger = QueryLedger::new();
        let rounded = swap_round(&acg.point, &m, &mut rng, &mut ledger).unwrap();
        assert!(rounded.is_empty());
        assert_eq!(f.eval(&rounded), 0.0);
    }

    #[test]
    fn acg_point_is_an_exact_convex_combination_inside_the_polytope() {
        let mut gen = crate::core::rng::run_rng(74);
        let f = rand_coverage(&mut gen, 10, 18);
        let m = PartitionMatroid::new(vec![0, 0, 0, 1, 1, 1, 2, 2, 2, 2], vec![1, 2, 1]).unwrap();
        let params = AlgoParams::continuous(0.1, 0.25, 4, 10, 3).unwrap();
        let acg =
            accelerated_continuous_greedy_with_backend(&f, &m, &params, SurrogateBackend::Exact)
                .unwrap();
        // total weight is steps * lambda, exactly
        assert_eq!(acg.point.total_weight(), ComboWeight::new(1, 1));
        for (_, s) in acg.point.terms() {
            assert!(m.is_independent(s));
        }
        let mut rng = crate::core::rng::run_rng(7);
        polytope_membership_spot_check(&acg.point, &m, 100, &mut rng).unwrap();
    }

    #[test]
    fn acg_refuses_matroid_intersections() {
        let f = ModularFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        let a = UniformMatroid::new(3, 2).unwrap();
        let b = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let ix = IntersectionConstraint::new(vec![Box::new(a), Box::new(b)]).unwrap();
        let params = AlgoParams::continuous(0.1, 0.25, 2, 3, 0).unwrap();
        assert!(matches!(
            accelerated_continuous_greedy(&f, &ix, &params),
            Err(Error::NotASingleMatroid)
        ));
    }

    #[test]
    fn acg_with_estimated_surrogate_stays_feasible_and_close() {
        let mut gen = crate::core::rng::run_rng(75);
        let n = 8;
        let f = rand_modular(&mut gen, n);
        let m = UniformMatroid::new(n, 2).unwrap();
        let opt = brute_force(&f, &m).unwrap().value;
        let mut params = AlgoParams::continuous(0.1, 0.25, 2, n, 11).unwrap();
        params.mc_samples = 600;
        let acg = accelerated_continuous_greedy(&f, &m, &params).unwrap();
        let mut rng = crate::core::rng::run_rng(2);
        let mut ledger = QueryLedger::new();
        let rounded = swap_round(&acg.point, &m, &mut rng, &mut ledger).unwrap();
        assert!(m.is_independent(&rounded));
        assert!(f.eval(&rounded) >= (1.0 - 1.0 / std::f64::consts::E - 0.15) * opt);
    }

    #[test]
    fn swap_round_degenerate_combinations() {
        let m = UniformMatroid::new(4, 2).unwrap();
        let b = ElementSet::from_elements(vec![1, 3]);
        let mut rng = crate::core::rng::run_rng(0);
        let mut ledger = QueryLedger::new();

        let single = FractionalPoint::indicator(4, b.clone()).unwrap();
        assert_eq!(swap_round(&single, &m, &mut rng, &mut ledger).unwrap(), b);

        let duplicated = FractionalPoint::from_terms(
            4,
            vec![
                (ComboWeight::new(1, 2), b.clone()),
                (ComboWeight::new(1, 2), b.clone()),
            ],
        )
        .unwrap();
        assert_eq!(swap_round(&duplicated, &m, &mut rng, &mut ledger).unwrap(), b);
    }

    #[test]
    fn swap_round_rejects_dependent_combination_sets() {
        let m = UniformMatroid::new(3, 1).unwrap();
        let x = FractionalPoint::indicator(3, ElementSet::from_elements(vec![0, 1])).unwrap();
        let mut rng = crate::core::rng::run_rng(0);
        let mut ledger = QueryLedger::new();
        assert!(matches!(
            swap_round(&x, &m, &mut rng, &mut ledger),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn swap_round_is_a_fair_coin_on_two_singletons() {
        let m = UniformMatroid::new(2, 1).unwrap();
        let x = FractionalPoint::from_terms(
            2,
            vec![
                (ComboWeight::new(1, 2), ElementSet::singleton(0)),
                (ComboWeight::new(1, 2), ElementSet::singleton(1)),
            ],
        )
        .unwrap();
        let mut rng = crate::core::rng::run_rng(33);
        let mut ledger = QueryLedger::new();
        let trials = 10_000;
        let mut zero = 0u64;
        for _ in 0..trials {
            let out = swap_round(&x, &m, &mut rng, &mut ledger).unwrap();
            assert_eq!(out.len(), 1);
            if out.contains(0) {
                zero += 1;
            }
        }
        let freq = zero as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.03, "element 0 frequency {freq}");
    }

    #[test]
    fn swap_round_makes_no_function_queries() {
        let (m, x) = base_combination();
        let mut rng = crate::core::rng::run_rng(5);
        let mut ledger = QueryLedger::new();
        ledger.charge_f_round(3); // pre-existing traffic must stay untouched
        let before = (ledger.f_rounds, ledger.f_queries);
        for _ in 0..50 {
            swap_round(&x, &m, &mut rng, &mut ledger).unwrap();
        }
        assert_eq!((ledger.f_rounds, ledger.f_queries), before);
        assert!(ledger.m_queries > 0);
    }

    #[test]
    fn swap_round_preserves_marginals_on_a_base_combination() {
        let (m, x) = base_combination();
        let mut rng = crate::core::rng::run_rng(37);
        let mut ledger = QueryLedger::new();
        let trials = 10_000usize;
        let mut hits = [0u64; 6];
        for _ in 0..trials {
            let out = swap_round(&x, &m, &mut rng, &mut ledger).unwrap();
            assert_eq!(out.len(), 3);
            for e in &out {
                hits[e] += 1;
            }
        }
        for (e, &hit) in hits.iter().enumerate() {
            let want = x.coord(e);
            let got = hit as f64 / trials as f64;
            let se = (want * (1.0 - want) / trials as f64).sqrt();
            assert!(
                (got - want).abs() <= 4.0 * se.max(1e-9),
                "element {e}: frequency {got} vs coordinate {want}"
            );
        }
    }

    #[test]
    fn swap_round_preserves_value_on_average() {
        let (m, x) = base_combination();
        let mut gen = crate::core::rng::run_rng(38);
        let f = rand_coverage(&mut gen, 6, 12);
        let exact = exact_multilinear(&f, &x).unwrap();
        let mut rng = crate::core::rng::run_rng(39);
        let mut ledger = QueryLedger::new();
        let trials = 10_000usize;
        let values: Vec<f64> = (0..trials)
            .map(|_| f.eval(&swap_round(&x, &m, &mut rng, &mut ledger).unwrap()))
            .collect();
        let (mean, std) = crate::stats::mean_and_sample_std(&values);
        let se = std / (trials as f64).sqrt();
        assert!(
            mean >= exact - 4.0 * se,
            "mean rounded value {mean} vs expectation {exact} (se {se})"
        );
    }

    #[test]
    fn per_step_gain_tracks_the_remaining_gap() {
        // while the point is still far from optimal, each step gains at
        // least (1 - 5*eps) * lambda * (OPT - F(x)) on average
        let mut gen = crate::core::rng::run_rng(76);
        let n = 8;
        let eps = 0.05;
        let lambda = 0.05;
        let f = rand_coverage(&mut gen, n, 12);
        let m = UniformMatroid::new(n, 2).unwrap();
        let opt = brute_force(&f, &m).unwrap().value;
        let params = AlgoParams::continuous(eps, lambda, 2, n, 0).unwrap();
        let mut ratios: Vec<f64> = Vec::new();
        for run in 0..100u64 {
            let p = params.with_seed(run);
            let acg =
                accelerated_continuous_greedy_with_backend(&f, &m, &p, SurrogateBackend::Exact)
                    .unwrap();
            let q = p.lambda_inverse();
            for step in 0..q {
                let before =
                    FractionalPoint::uniform_combination(n, q, &acg.chosen[..step]).unwrap();
                let after =
                    FractionalPoint::uniform_combination(n, q, &acg.chosen[..step + 1]).unwrap();
                let fx = exact_multilinear(&f, &before).unwrap();
                if fx >= (1.0 - 1.0 / std::f64::consts::E) * opt {
                    continue;
                }
                let gain = exact_multilinear(&f, &after).unwrap() - fx;
                ratios.push(gain / (lambda * (opt - fx)));
            }
        }
        assert!(ratios.len() > 200, "too few qualifying steps");
        let (mean, _) = crate::stats::mean_and_sample_std(&ratios);
        assert!(
            mean >= 1.0 - 5.0 * eps,
            "mean per-step gain ratio {mean} below {}",
            1.0 - 5.0 * eps
        );
    }
}
