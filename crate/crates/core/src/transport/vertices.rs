//! Brute-force vertex enumeration of the transportation polytope, used as an
//! independent oracle against the simplex solver.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::transport::{Distribution, TransportPlan};
use crate::triangulation::trees;

/// All vertices of the transportation polytope of `(mu, nu)`, deduplicated.
///
/// Every vertex is the basic solution of some spanning tree of the complete
/// bipartite graph whose solved entries are all nonnegative; this walks all
/// trees, so it is restricted to `n <= 4`.
pub fn enumerate_vertices(mu: &Distribution, nu: &Distribution) -> Result<Vec<TransportPlan>> {
    let n = mu.n();
    if nu.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "marginals have lengths {} and {}",
            n,
            nu.n()
        )));
    }
    if n > 4 {
        return Err(Error::Capability(format!(
            "oracle restricted to n <= 4, got n = {n}"
        )));
    }
    let masks = trees::spanning_tree_masks(n)?;
    let mut seen: BTreeSet<Vec<Vec<Rational>>> = BTreeSet::new();
    let mut out = Vec::new();
    for &mask in masks {
        if let Some(entries) = solve_tree(n, mask, mu, nu) {
            if seen.insert(entries.clone()) {
                out.push(TransportPlan::from_entries(entries));
            }
        }
    }
    Ok(out)
}

/// Basic solution of the tree system, or `None` when any entry is negative.
fn solve_tree(
    n: usize,
    mask: u32,
    mu: &Distribution,
    nu: &Distribution,
) -> Option<Vec<Vec<Rational>>> {
    let edges = trees::mask_edges(n, mask);
    // node ids: 0..n rows (marginal nu), n..2n columns (marginal mu)
    let mut remaining: Vec<Rational> = nu
        .masses()
        .iter()
        .chain(mu.masses())
        .cloned()
        .collect();
    let mut degree = vec![0usize; 2 * n];
    let mut alive = vec![true; edges.len()];
    for &(i, j) in &edges {
        degree[i] += 1;
        degree[n + j] += 1;
    }
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for _ in 0..edges.len() {
        let (idx, leaf) = edges
            .iter()
            .enumerate()
            .find_map(|(idx, &(i, j))| {
                if !alive[idx] {
                    return None;
                }
                if degree[i] == 1 {
                    Some((idx, i))
                } else if degree[n + j] == 1 {
                    Some((idx, n + j))
                } else {
                    None
                }
            })
            .expect("a tree always has a leaf");
        let (i, j) = edges[idx];
        let value = remaining[leaf].clone();
        if value.is_negative() {
            return None;
        }
        let other = if leaf == i { n + j } else { i };
        remaining[other] -= &value;
        remaining[leaf] = Rational::zero();
        degree[i] -= 1;
        degree[n + j] -= 1;
        alive[idx] = false;
        entries[i][j] = value;
    }
    Some(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::{wasserstein, GroundMetric};

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    fn dist(vals: &[(i64, i64)]) -> Distribution {
        Distribution::new(vals.iter().map(|&(p, q)| r(p, q)).collect()).unwrap()
    }

    #[test]
    fn point_mass_has_single_vertex() {
        let mu = dist(&[(1, 1), (0, 1)]);
        let vs = enumerate_vertices(&mu, &mu).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].entry(0, 0), &r(1, 1));
        assert!(vs[0].entry(1, 1).is_zero());
    }

    #[test]
    fn two_by_two_has_both_permutation_scalings() {
        let u = Distribution::uniform(2);
        let vs = enumerate_vertices(&u, &u).unwrap();
        let diag = vec![vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(1, 2)]];
        let anti = vec![vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]];
        assert!(vs.iter().any(|p| p.entries() == diag.as_slice()));
        assert!(vs.iter().any(|p| p.entries() == anti.as_slice()));
    }

    #[test]
    fn oracle_matches_simplex_on_fixed_instances() {
        let d = GroundMetric::discrete(3);
        let mu = dist(&[(1, 2), (1, 7), (5, 14)]);
        let nu = dist(&[(1, 5), (3, 10), (1, 2)]);
        let (value, _) = wasserstein(&d, &mu, &nu).unwrap();
        let best = enumerate_vertices(&mu, &nu)
            .unwrap()
            .iter()
            .map(|p| p.cost(&d))
            .min()
            .unwrap();
        assert_eq!(value, best);
    }

    #[test]
    fn oracle_rejects_large_n() {
        let u = Distribution::uniform(5);
        let err = enumerate_vertices(&u, &u).unwrap_err();
        assert!(err.to_string().contains("n <= 4"));
    }

    #[test]
    fn vertices_are_feasible_and_sparse() {
        let mu = dist(&[(1, 3), (1, 3), (1, 3)]);
        let nu = dist(&[(1, 2), (1, 4), (1, 4)]);
        for v in enumerate_vertices(&mu, &nu).unwrap() {
            assert!(v.is_feasible_for(&mu, &nu));
            assert!(v.support().len() <= 5);
        }
    }
}
