//! Exact solution of the transportation problem between two distributions.
//!
//! The feasible set is the polytope of nonnegative `n x n` matrices whose
//! column sums equal the first marginal and whose row sums equal the second;
//! the optimal value under a ground cost matrix is the Wasserstein distance.
//! All computation is exact rational arithmetic.

mod simplex;
mod vertices;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::Rational;

pub use vertices::enumerate_vertices;

/// Point of the probability simplex: nonnegative masses summing to one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution {
    mass: Vec<Rational>,
}

impl Distribution {
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::NotADistribution("empty mass vector".into()));
        }
        if let Some(m) = mass.iter().find(|m| m.is_negative()) {
            return Err(Error::NotADistribution(format!("negative mass {m}")));
        }
        let total: Rational = mass.iter().cloned().sum();
        if total != Rational::one() {
            return Err(Error::NotADistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Distribution { mass })
    }

    pub fn uniform(n: usize) -> Self {
        Distribution {
            mass: vec![Rational::of(1, n as i64); n],
        }
    }

    /// Parses a comma-separated list of rationals, e.g. `"1/2,1/7,5/14"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mass = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<Rational>>>()?;
        Self::new(mass)
    }

    pub fn n(&self) -> usize {
        self.mass.len()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.mass[i]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }
}

/// Symmetric nonnegative cost matrix with zero diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundMetric {
    n: usize,
    cost: Vec<Vec<Rational>>,
}

impl GroundMetric {
    pub fn new(cost: Vec<Vec<Rational>>) -> Result<Self> {
        let n = cost.len();
        if n == 0 || cost.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric("cost matrix is not square".into()));
        }
        for i in 0..n {
            if !cost[i][i].is_zero() {
                return Err(Error::InvalidMetric(format!(
                    "nonzero diagonal entry d[{}][{}] = {}",
                    i + 1,
                    i + 1,
                    cost[i][i]
                )));
            }
            for j in 0..n {
                if cost[i][j].is_negative() {
                    return Err(Error::InvalidMetric(format!(
                        "negative entry d[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        cost[i][j]
                    )));
                }
                if cost[i][j] != cost[j][i] {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric entries at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(GroundMetric { n, cost })
    }

    /// `d[i][j] = 1` off the diagonal, `0` on it.
    pub fn discrete(n: usize) -> Self {
        let cost = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            Rational::one()
                        }
                    })
                    .collect()
            })
            .collect();
        GroundMetric { n, cost }
    }

    /// Hamming distance on two-bit strings, states ordered 00, 01, 10, 11.
    pub fn hamming_2bit() -> Self {
        let rows = [[0, 1, 1, 2], [1, 0, 2, 1], [1, 2, 0, 1], [2, 1, 1, 0]];
        GroundMetric {
            n: 4,
            cost: rows
                .iter()
                .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        GroundMetric {
            n,
            cost: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cost(&self, i: usize, j: usize) -> &Rational {
        &self.cost[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.cost
    }

    pub fn max_entry(&self) -> Rational {
        self.cost
            .iter()
            .flatten()
            .cloned()
            .fold(Rational::zero(), Rational::max)
    }

    /// Checks `d[i][k] <= d[i][j] + d[j][k]` for all triples.
    pub fn satisfies_triangle_inequality(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.cost[i][k] > &self.cost[i][j] + &self.cost[j][k] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Feasible transport plan that is a vertex of the transportation polytope:
/// its support is acyclic in the complete bipartite graph, hence has at most
/// `2n - 1` entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportPlan {
    n: usize,
    entries: Vec<Vec<Rational>>,
    support: BTreeSet<(usize, usize)>,
}

impl TransportPlan {
    pub(crate) fn from_entries(entries: Vec<Vec<Rational>>) -> Self {
        let n = entries.len();
        let support = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !entries[i][j].is_zero())
            .collect();
        TransportPlan { n, entries, support }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Index pairs carrying nonzero mass.
    pub fn support(&self) -> &BTreeSet<(usize, usize)> {
        &self.support
    }

    pub fn cost(&self, d: &GroundMetric) -> Rational {
        let mut acc = Rational::zero();
        for &(i, j) in &self.support {
            acc += &(d.cost(i, j) * &self.entries[i][j]);
        }
        acc
    }

    /// Exact marginal identities: column sums equal `mu`, row sums equal `nu`.
    pub fn is_feasible_for(&self, mu: &Distribution, nu: &Distribution) -> bool {
        if mu.n() != self.n || nu.n() != self.n {
            return false;
        }
        for j in 0..self.n {
            let col: Rational = (0..self.n).map(|i| self.entries[i][j].clone()).sum();
            if &col != mu.get(j) {
                return false;
            }
        }
        for i in 0..self.n {
            let row: Rational = self.entries[i].iter().cloned().sum();
            if &row != nu.get(i) {
                return false;
            }
        }
        self.entries.iter().flatten().all(|x| !x.is_negative())
    }
}

/// Exact Wasserstein distance between `mu` and `nu` under the metric `d`,
/// together with an optimal vertex plan.
///
/// Column sums of the plan equal `mu` and row sums equal `nu`. The solver is
/// a network simplex over spanning-tree bases with rational pivoting; Bland's
/// rule makes degenerate pivots (which arise for boundary marginals) safe.
pub fn wasserstein(
    d: &GroundMetric,
    mu: &Distribution,
    nu: &Distribution,
) -> Result<(Rational, TransportPlan)> {
    if mu.n() != d.n() || nu.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "metric is {0}x{0} but marginals have lengths {1} and {2}",
            d.n(),
            mu.n(),
            nu.n()
        )));
    }
    Ok(simplex::solve(d, mu, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    fn dist(vals: &[(i64, i64)]) -> Distribution {
        Distribution::new(vals.iter().map(|&(p, q)| r(p, q)).collect()).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![r(1, 2), r(1, 2)]).is_ok());
        assert!(Distribution::new(vec![r(1, 2), r(1, 3)]).is_err());
        assert!(Distribution::new(vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(Distribution::parse("1/2, 1/7, 5/14").is_ok());
    }

    #[test]
    fn metric_validation() {
        assert!(GroundMetric::new(vec![
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
        ])
        .is_ok());
        // asymmetric
        assert!(GroundMetric::new(vec![
            vec![r(0, 1), r(1, 1)],
            vec![r(2, 1), r(0, 1)],
        ])
        .is_err());
        // nonzero diagonal
        assert!(GroundMetric::new(vec![
            vec![r(1, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
        ])
        .is_err());
        assert!(GroundMetric::discrete(3).satisfies_triangle_inequality());
        assert!(GroundMetric::hamming_2bit().satisfies_triangle_inequality());
    }

    #[test]
    fn identical_marginals_have_zero_distance_and_diagonal_plan() {
        let d = GroundMetric::discrete(3);
        let u = Distribution::uniform(3);
        let (value, plan) = wasserstein(&d, &u, &u).unwrap();
        assert!(value.is_zero());
        for i in 0..3 {
            assert_eq!(plan.entry(i, i), &r(1, 3));
        }
        assert_eq!(plan.support().len(), 3);
    }

    #[test]
    fn discrete_metric_value_is_half_l1() {
        let d = GroundMetric::discrete(3);
        let mu = dist(&[(1, 2), (1, 7), (5, 14)]);
        let nu = dist(&[(1, 2), (5, 14), (1, 7)]);
        let (value, plan) = wasserstein(&d, &mu, &nu).unwrap();
        assert_eq!(value, r(3, 14));
        assert!(plan.is_feasible_for(&mu, &nu));
        assert_eq!(plan.cost(&d), value);
    }

    #[test]
    fn hamming_corner_to_corner() {
        let d = GroundMetric::hamming_2bit();
        let mu = dist(&[(1, 1), (0, 1), (0, 1), (0, 1)]);
        let nu = dist(&[(0, 1), (0, 1), (0, 1), (1, 1)]);
        let (value, plan) = wasserstein(&d, &mu, &nu).unwrap();
        assert_eq!(value, r(2, 1));
        assert_eq!(plan.entry(3, 0), &r(1, 1));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let d = GroundMetric::discrete(3);
        let mu = Distribution::uniform(2);
        assert!(wasserstein(&d, &mu, &Distribution::uniform(3)).is_err());
    }
}
