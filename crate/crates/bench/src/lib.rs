//! Shared instance generators for the benchmarks.

use otv_core::{Distribution, GroundMetric, Rational};

/// Deterministic pseudo-random symmetric metric with denominator `denom`.
pub fn random_metric(seed: u64, n: usize, denom: i64) -> GroundMetric {
    let mut state = seed;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % (denom as u64 - 1) + 1) as i64
    };
    let mut cost = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::of(next(), denom);
            cost[i][j] = v.clone();
            cost[j][i] = v;
        }
    }
    GroundMetric::new(cost).unwrap()
}

pub fn random_distribution(seed: u64, n: usize) -> Distribution {
    let mut state = seed;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % 29 + 1) as i64
    };
    let parts: Vec<i64> = (0..n).map(|_| next()).collect();
    let total: i64 = parts.iter().sum();
    Distribution::new(parts.iter().map(|&p| Rational::of(p, total)).collect()).unwrap()
}
