//! Concrete monotone submodular value oracles and the Monte Carlo estimator
//! of the multilinear extension `F(x) = E[f(R)]`, `R ~ x`.

use num_rational::Ratio;
use rand::Rng;

use crate::core::{
    batch_eval, rng::substream, Element, ElementSet, Error, QueryLedger, Result, RoundCounter,
    SubmodularOracle,
};

/// Additive function `f(S) = sum of weights over S`. Modular, hence monotone
/// and submodular with equality; the workhorse test oracle.
#[derive(Debug, Clone)]
pub struct ModularFunction {
    weights: Vec<f64>,
}

impl ModularFunction {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty ground set".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "modular weights must be finite and non-negative".into(),
            ));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SubmodularOracle for ModularFunction {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.weights[e]).sum()
    }

    fn multilinear_closed_form(&self, coords: &[f64]) -> Option<f64> {
        Some(coords.iter().zip(&self.weights).map(|(x, w)| x * w).sum())
    }
}

/// Coverage function `f(S) = |union of cover(i) over i in S|` on a universe
/// of `universe` items, stored as bit masks.
#[derive(Debug, Clone)]
pub struct CoverageFunction {
    universe: usize,
    covers: Vec<Vec<usize>>,
    masks: Vec<Vec<u64>>,
    words: usize,
}

impl CoverageFunction {
    pub fn new(universe: usize, covers: Vec<Vec<usize>>) -> Result<Self> {
        if covers.is_empty() {
            return Err(Error::InvalidParameter("empty ground set".into()));
        }
        // cover lists are item sets
        let covers: Vec<Vec<usize>> = covers
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let words = universe.div_ceil(64).max(1);
        let mut masks = Vec::with_capacity(covers.len());
        for (i, cover) in covers.iter().enumerate() {
            let mut mask = vec![0u64; words];
            for &item in cover {
                if item >= universe {
                    return Err(Error::InvalidParameter(format!(
                        "element {i} covers item {item} outside universe of {universe}"
                    )));
                }
                mask[item / 64] |= 1 << (item % 64);
            }
            masks.push(mask);
        }
        Ok(Self {
            universe,
            covers,
            masks,
            words,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }
}

impl SubmodularOracle for CoverageFunction {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn eval(&self, set: &ElementSet) -> f64 {
        let mut acc = vec![0u64; self.words];
        for e in set {
            for (w, m) in acc.iter_mut().zip(&self.masks[e]) {
                *w |= m;
            }
        }
        acc.iter().map(|w| w.count_ones() as u64).sum::<u64>() as f64
    }

    /// `F(x) = sum over items u of (1 - prod over coverers i of (1 - x_i))`:
    /// items are covered independently, so the expectation factorizes.
    fn multilinear_closed_form(&self, coords: &[f64]) -> Option<f64> {
        let mut miss = vec![1.0f64; self.universe];
        for (i, cover) in self.covers.iter().enumerate() {
            let keep = 1.0 - coords[i];
            for &item in cover {
                miss[item] *= keep;
            }
        }
        Some(miss.iter().map(|m| 1.0 - m).sum::<f64>())
    }
}

/// Exact weight of one set in a convex combination.
pub type ComboWeight = Ratio<u64>;

/// A point of the matroid polytope, stored as an explicit convex combination
/// of independent sets. Coordinates are derived from the combination, never
/// accumulated, so the membership witness cannot drift.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    n: usize,
    terms: Vec<(ComboWeight, ElementSet)>,
    coords: Vec<f64>,
}

impl FractionalPoint {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
            coords: vec![0.0; n],
        }
    }

    /// The indicator point `1_S` (a single full-weight term).
    pub fn indicator(n: usize, set: ElementSet) -> Result<Self> {
        Self::from_terms(n, vec![(ComboWeight::new(1, 1), set)])
    }

    pub fn from_terms(n: usize, terms: Vec<(ComboWeight, ElementSet)>) -> Result<Self> {
        let mut total = ComboWeight::new(0, 1);
        for (w, set) in &terms {
            if *w == ComboWeight::new(0, 1) {
                return Err(Error::InvalidParameter("zero combination weight".into()));
            }
            if let Some(e) = set.max_element() {
                if e >= n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
            }
            total += *w;
        }
        if total > ComboWeight::new(1, 1) {
            return Err(Error::InvalidParameter(format!(
                "combination weights sum to {total} > 1"
            )));
        }
        let mut point = Self {
            n,
            terms,
            coords: Vec::new(),
        };
        point.rebuild_coords();
        Ok(point)
    }

    /// Equal-weight combination `(1/denominator) * sum of indicator(sets)`.
    pub fn uniform_combination(
        n: usize,
        denominator: usize,
        sets: &[ElementSet],
    ) -> Result<Self> {
        if denominator == 0 || sets.len() > denominator {
            return Err(Error::InvalidParameter(
                "need sets.len() <= denominator and denominator >= 1".into(),
            ));
        }
        Self::from_terms(
            n,
            sets.iter()
                .map(|s| (ComboWeight::new(1, denominator as u64), s.clone()))
                .collect(),
        )
    }

    /// Builds a point with the given rational coordinates by peeling level
    /// sets; the combination consists of nested sets, so it witnesses
    /// membership in any matroid polytope whose rank function admits the
    /// largest level set. Coordinates are `numerators[i] / denominator`.
    pub fn from_rational_coords(numerators: &[u64], denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if numerators.iter().any(|&c| c > denominator) {
            return Err(Error::InvalidParameter(
                "coordinates must lie in [0,1]".into(),
            ));
        }
        let n = numerators.len();
        let mut remaining: Vec<u64> = numerators.to_vec();
        let mut terms = Vec::new();
        loop {
            let support: Vec<Element> = (0..n).filter(|&i| remaining[i] > 0).collect();
            if support.is_empty() {
                break;
            }
            let peel = support.iter().map(|&i| remaining[i]).min().unwrap();
            for &i in &support {
                remaining[i] -= peel;
            }
            terms.push((
                ComboWeight::new(peel, denominator),
                ElementSet::from_sorted_unchecked(support),
            ));
        }
        Self::from_terms(n, terms)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, e: Element) -> f64 {
        self.coords[e]
    }

    pub fn terms(&self) -> &[(ComboWeight, ElementSet)] {
        &self.terms
    }

    pub fn total_weight(&self) -> ComboWeight {
        self.terms
            .iter()
            .fold(ComboWeight::new(0, 1), |acc, (w, _)| acc + *w)
    }

    /// Exact rational coordinate of `e` (the weighted indicator sum).
    pub fn rational_coord(&self, e: Element) -> ComboWeight {
        self.terms
            .iter()
            .filter(|(_, s)| s.contains(e))
            .fold(ComboWeight::new(0, 1), |acc, (w, _)| acc + *w)
    }

    fn rebuild_coords(&mut self) {
        self.coords = (0..self.n)
            .map(|e| {
                let r = self.rational_coord(e);
                *r.numer() as f64 / *r.denom() as f64
            })
            .collect();
    }

    /// Elements with a strictly positive coordinate.
    pub fn support(&self) -> ElementSet {
        (0..self.n).filter(|&e| self.coords[e] > 0.0).collect()
    }
}

/// Draws the element-inclusion uniforms for one sample. Within a batch the
/// same draws are reused for every evaluated point (common random numbers),
/// and odd samples are the antithetic mirror of their predecessor.
pub(crate) fn sample_uniforms(n: usize, seed: u64, round: u64, sample: u64) -> Vec<f64> {
    let pair = sample / 2;
    let mut rng = substream(seed, round, pair);
    let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    if sample % 2 == 1 {
        for v in &mut u {
            *v = 1.0 - *v;
        }
    }
    u
}

/// `R ~ x` under the given uniforms: include `i` iff `u_i < x_i`.
pub(crate) fn include_set(u: &[f64], coords: &[f64]) -> ElementSet {
    ElementSet::from_sorted_unchecked(
        (0..coords.len()).filter(|&i| u[i] < coords[i]).collect(),
    )
}

/// `R ~ (x + lambda * 1_T)` built on top of the base sample: the elements of
/// `T` whose uniform falls in `[x_i, x_i + lambda)` join the base set.
pub(crate) fn bumped_set(
    base: &ElementSet,
    u: &[f64],
    coords: &[f64],
    lambda: f64,
    t: &ElementSet,
) -> ElementSet {
    let mut out = base.clone();
    for e in t {
        if u[e] >= coords[e] && u[e] < coords[e] + lambda {
            out.insert(e);
        }
    }
    out
}

/// Monte Carlo estimator of the multilinear extension: the mean of `f` over
/// `samples` independent sets drawn from the product distribution of a
/// fractional point. Each estimate consumes exactly one adaptive round.
#[derive(Debug)]
pub struct MultilinearEstimator {
    samples: usize,
    seed: u64,
    round: RoundCounter,
}

impl MultilinearEstimator {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter("need at least one sample".into()));
        }
        Ok(Self {
            samples,
            seed,
            round: RoundCounter::new(),
        })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Unbiased estimate of `F(x)`; all samples go into one batch.
    pub fn estimate(
        &self,
        f: &dyn SubmodularOracle,
        x: &FractionalPoint,
        ledger: &mut QueryLedger,
    ) -> Result<f64> {
        Ok(self.estimate_with_std(f, x, ledger)?.0)
    }

    /// Estimate plus the sample standard deviation of the per-sample values.
    pub fn estimate_with_std(
        &self,
        f: &dyn SubmodularOracle,
        x: &FractionalPoint,
        ledger: &mut QueryLedger,
    ) -> Result<(f64, f64)> {
        if x.ground_size() != f.ground_size() {
            return Err(Error::InvalidParameter(
                "point and function disagree on the ground set".into(),
            ));
        }
        let round = self.round.next();
        let queries: Vec<ElementSet> = (0..self.samples)
            .map(|j| {
                // independent samples: a fresh substream per sample index
                let mut rng = substream(self.seed, round, j as u64);
                let u: Vec<f64> = (0..x.ground_size()).map(|_| rng.random::<f64>()).collect();
                include_set(&u, x.coords())
            })
            .collect();
        let values = batch_eval(f, &queries, ledger)?;
        Ok(crate::stats::mean_and_sample_std(&values))
    }

    /// Coupled estimates of the step marginals `F(x + lambda*1_T) - F(x)` for
    /// every `T` in `t_sets`, sharing one batch and one set of sample draws.
    ///
    /// Per sample, one uniform per element is drawn and reused across all
    /// evaluated points, with antithetic pairing, so comparisons between the
    /// estimates see far less noise than independent estimation would give.
    pub fn step_marginals(
        &self,
        f: &dyn SubmodularOracle,
        x: &FractionalPoint,
        lambda: f64,
        t_sets: &[ElementSet],
        ledger: &mut QueryLedger,
    ) -> Result<Vec<f64>> {
        if t_sets.is_empty() {
            return Err(Error::EmptyBatch);
        }
        for t in t_sets {
            check_step_fits(x.coords(), lambda, t)?;
        }
        let round = self.round.next();
        let n = x.ground_size();
        let m = self.samples;

        let uniforms: Vec<Vec<f64>> = (0..m)
            .map(|j| sample_uniforms(n, self.seed, round, j as u64))
            .collect();
        let bases: Vec<ElementSet> = uniforms.iter().map(|u| include_set(u, x.coords())).collect();

        // layout: m base sets, then m bumped sets per T
        let mut queries = bases.clone();
        for t in t_sets {
            for (j, u) in uniforms.iter().enumerate() {
                queries.push(bumped_set(&bases[j], u, x.coords(), lambda, t));
            }
        }
        let values = batch_eval(f, &queries, ledger)?;

        let mut out = Vec::with_capacity(t_sets.len());
        for ti in 0..t_sets.len() {
            let offset = m * (ti + 1);
            let mean = (0..m)
                .map(|j| values[offset + j] - values[j])
                .sum::<f64>()
                / m as f64;
            out.push(mean);
        }
        Ok(out)
    }

    /// Single-marginal convenience wrapper around [`Self::step_marginals`].
    pub fn step_marginal(
        &self,
        f: &dyn SubmodularOracle,
        x: &FractionalPoint,
        lambda: f64,
        t: &ElementSet,
        ledger: &mut QueryLedger,
    ) -> Result<f64> {
        Ok(self.step_marginals(f, x, lambda, std::slice::from_ref(t), ledger)?[0])
    }
}

pub(crate) fn check_step_fits(coords: &[f64], lambda: f64, t: &ElementSet) -> Result<()> {
    for e in t {
        if coords[e] + lambda > 1.0 + 1e-12 {
            return Err(Error::CoordinateOverflow { element: e, lambda });
        }
    }
    Ok(())
}
