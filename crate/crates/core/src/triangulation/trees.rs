//! Exhaustive enumeration of the spanning trees of the complete bipartite
//! graph on `[n] x [n]`, cached per `n`.
//!
//! A tree is stored as a bitmask over edge positions `i*n + j`. Enumeration
//! walks all `(2n-1)`-subsets of the `n^2` edges in lexicographic order and
//! keeps the acyclic connected ones, so the resulting list is canonically
//! ordered (lexicographic on sorted edge lists).

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub(crate) const MIN_N: usize = 2;
pub(crate) const MAX_N: usize = 5;

static CACHE: [OnceLock<Vec<u32>>; MAX_N + 1] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

pub(crate) fn check_supported(n: usize) -> Result<()> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::Capability(format!(
            "spanning-tree enumeration supports {MIN_N} <= n <= {MAX_N}, got n = {n}"
        )));
    }
    Ok(())
}

pub(crate) fn spanning_tree_masks(n: usize) -> Result<&'static [u32]> {
    check_supported(n)?;
    Ok(CACHE[n].get_or_init(|| enumerate(n)))
}

fn enumerate(n: usize) -> Vec<u32> {
    let edges = n * n;
    let k = 2 * n - 1;
    let mut combo: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        if is_spanning_tree(n, &combo) {
            let mask = combo.iter().fold(0u32, |m, &p| m | 1 << p);
            out.push(mask);
        }
        // next k-combination of 0..edges in lexicographic order
        let mut idx = k;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if combo[idx] != edges - k + idx {
                break;
            }
        }
        combo[idx] += 1;
        for t in idx + 1..k {
            combo[t] = combo[t - 1] + 1;
        }
    }
}

/// `2n - 1` edges on `2n` nodes span a tree iff they close no cycle.
fn is_spanning_tree(n: usize, positions: &[usize]) -> bool {
    let mut parent = [0usize; 2 * MAX_N];
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i;
    }
    fn find(parent: &mut [usize; 2 * MAX_N], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &pos in positions {
        let row = pos / n;
        let col = n + pos % n;
        let (ra, rb) = (find(&mut parent, row), find(&mut parent, col));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Edge list `(i, j)` of a mask, ascending (row-major positions).
pub(crate) fn mask_edges(n: usize, mask: u32) -> Vec<(usize, usize)> {
    (0..n * n)
        .filter(|p| mask & (1 << p) != 0)
        .map(|p| (p / n, p % n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_bipartite_cayley_formula() {
        // n^(n-1) * n^(n-1)
        assert_eq!(spanning_tree_masks(2).unwrap().len(), 4);
        assert_eq!(spanning_tree_masks(3).unwrap().len(), 81);
        assert_eq!(spanning_tree_masks(4).unwrap().len(), 4096);
    }

    #[test]
    fn out_of_range_is_capability_error() {
        assert!(matches!(
            spanning_tree_masks(6),
            Err(Error::Capability(_))
        ));
        assert!(matches!(spanning_tree_masks(1), Err(Error::Capability(_))));
    }

    #[test]
    fn masks_are_distinct_trees_in_lex_order() {
        let masks = spanning_tree_masks(3).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut prev: Option<Vec<(usize, usize)>> = None;
        for &m in masks {
            assert_eq!(m.count_ones(), 5);
            assert!(seen.insert(m));
            let edges = mask_edges(3, m);
            if let Some(p) = prev {
                assert!(p < edges);
            }
            prev = Some(edges);
        }
    }
}
