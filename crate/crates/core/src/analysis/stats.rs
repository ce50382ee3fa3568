//! Small statistical toolkit for the Monte Carlo experiments.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Pearson goodness-of-fit against the given category probabilities.
pub fn chi_square(counts: &[u64], probabilities: &[f64]) -> ChiSquareTest {
    assert_eq!(counts.len(), probabilities.len(), "one probability per category");
    assert!(counts.len() >= 2, "need at least two categories");
    let n: u64 = counts.iter().sum();
    let statistic = counts
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum::<f64>();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    ChiSquareTest { statistic, dof, p_value: 1.0 - dist.cdf(statistic) }
}

pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareTest {
    let p = 1.0 / counts.len() as f64;
    chi_square(counts, &vec![p; counts.len()])
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Two-sided normal quantile for `confidence` (1.96 at 0.95).
pub fn z_score(confidence: f64) -> f64 {
    standard_normal().inverse_cdf(0.5 + confidence / 2.0)
}

/// Normal-approximation interval for a binomial proportion, clamped to
/// `[0, 1]`. Collapses to a point when the sample is degenerate.
pub fn proportion_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / trials as f64;
    let half = z_score(confidence) * (p * (1.0 - p) / trials as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

pub fn binomial_sd(trials: u64, p: f64) -> f64 {
    (trials as f64 * p * (1.0 - p)).sqrt()
}

/// Two-sided pooled two-proportion z-test; returns the p-value.
pub fn two_proportion_test(x1: u64, n1: u64, x2: u64, n2: u64) -> f64 {
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if se == 0.0 {
        return 1.0;
    }
    let z = (x1 as f64 / n1 as f64 - x2 as f64 / n2 as f64) / se;
    2.0 * (1.0 - standard_normal().cdf(z.abs()))
}
