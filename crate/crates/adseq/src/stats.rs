//! Statistical helpers for the distribution checks: chi-square tests over
//! sequence outcomes and total-variation distances between empirical laws.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Mean and sample standard deviation (n-1 denominator; 0 for n < 2).
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn chi2_pvalue(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("positive df");
    1.0 - dist.cdf(stat.max(0.0))
}

/// One-sample goodness-of-fit test of observed counts against expected
/// probabilities. Returns the p-value.
pub fn chi_square_gof(observed: &[u64], probabilities: &[f64]) -> f64 {
    assert_eq!(observed.len(), probabilities.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probabilities) {
        let expected = total as f64 * p;
        if expected > 0.0 {
            stat += (o as f64 - expected).powi(2) / expected;
        } else {
            assert_eq!(o, 0, "observed an outcome of probability zero");
        }
    }
    chi2_pvalue(stat, observed.len().saturating_sub(1))
}

/// Two-sample chi-square homogeneity test over categorical counts keyed by
/// arbitrary ordered outcomes. Returns the p-value of "both samples are
/// drawn from the same law".
pub fn chi_square_two_sample<K: Ord + Clone>(
    counts_a: &BTreeMap<K, u64>,
    counts_b: &BTreeMap<K, u64>,
) -> f64 {
    let keys: Vec<K> = counts_a
        .keys()
        .chain(counts_b.keys())
        .cloned()
        .collect::<std::collections::BTreeSet<K>>()
        .into_iter()
        .collect();
    let total_a: u64 = counts_a.values().sum();
    let total_b: u64 = counts_b.values().sum();
    assert!(total_a > 0 && total_b > 0, "empty sample");
    let grand = (total_a + total_b) as f64;

    let mut stat = 0.0;
    let mut used_categories = 0usize;
    for key in &keys {
        let oa = *counts_a.get(key).unwrap_or(&0) as f64;
        let ob = *counts_b.get(key).unwrap_or(&0) as f64;
        let row = oa + ob;
        if row == 0.0 {
            continue;
        }
        used_categories += 1;
        let ea = row * total_a as f64 / grand;
        let eb = row * total_b as f64 / grand;
        stat += (oa - ea).powi(2) / ea + (ob - eb).powi(2) / eb;
    }
    chi2_pvalue(stat, used_categories.saturating_sub(1))
}

/// Total-variation distance between two empirical distributions.
pub fn total_variation<K: Ord + Clone>(
    counts_a: &BTreeMap<K, u64>,
    counts_b: &BTreeMap<K, u64>,
) -> f64 {
    let total_a: u64 = counts_a.values().sum();
    let total_b: u64 = counts_b.values().sum();
    assert!(total_a > 0 && total_b > 0, "empty sample");
    let keys: std::collections::BTreeSet<K> = counts_a
        .keys()
        .chain(counts_b.keys())
        .cloned()
        .collect();
    let mut tv = 0.0;
    for key in keys {
        let pa = *counts_a.get(&key).unwrap_or(&0) as f64 / total_a as f64;
        let pb = *counts_b.get(&key).unwrap_or(&0) as f64 / total_b as f64;
        tv += (pa - pb).abs();
    }
    tv / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn mean_std_basics() {
        let (m, s) = mean_and_sample_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert!((m - 5.0).abs() < 1e-12);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_sample_std(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn gof_accepts_fair_die_and_rejects_loaded_one() {
        let mut rng = crate::core::rng::run_rng(42);
        let mut fair = [0u64; 6];
        let mut loaded = [0u64; 6];
        for _ in 0..6000 {
            fair[rng.random_range(0..6)] += 1;
            let l = if rng.random::<f64>() < 0.25 {
                0
            } else {
                rng.random_range(0..6)
            };
            loaded[l] += 1;
        }
        let p_fair = chi_square_gof(&fair, &[1.0 / 6.0; 6]);
        let p_loaded = chi_square_gof(&loaded, &[1.0 / 6.0; 6]);
        assert!(p_fair > 0.01, "fair die rejected: p = {p_fair}");
        assert!(p_loaded < 1e-6, "loaded die accepted: p = {p_loaded}");
    }

    #[test]
    fn two_sample_test_distinguishes_laws() {
        let mut rng = crate::core::rng::run_rng(7);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng, skew: f64| {
            let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
            for _ in 0..5000 {
                let v = if rng.random::<f64>() < skew {
                    0
                } else {
                    rng.random_range(0..4)
                };
                *counts.entry(v).or_default() += 1;
            }
            counts
        };
        let a = draw(&mut rng, 0.0);
        let b = draw(&mut rng, 0.0);
        let c = draw(&mut rng, 0.3);
        assert!(chi_square_two_sample(&a, &b) > 0.01);
        assert!(chi_square_two_sample(&a, &c) < 1e-6);
        assert!(total_variation(&a, &b) < 0.05);
        assert!(total_variation(&a, &c) > 0.1);
    }
}
