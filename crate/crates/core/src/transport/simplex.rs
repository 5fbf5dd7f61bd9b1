//! Network simplex on the transportation polytope, specialized to dense
//! `n x n` instances with exact rational arithmetic.
//!
//! A basis is a spanning tree of the complete bipartite graph on row and
//! column nodes. The initial basis comes from the northwest-corner rule;
//! pivoting uses Bland's rule for both the entering and the leaving edge, so
//! degenerate bases (zero-mass basic entries from boundary marginals) cannot
//! cycle.

use crate::exact::Rational;
use crate::transport::{Distribution, GroundMetric, TransportPlan};

pub(crate) fn solve(
    d: &GroundMetric,
    mu: &Distribution,
    nu: &Distribution,
) -> (Rational, TransportPlan) {
    let n = d.n();
    let mut flow = vec![vec![Rational::zero(); n]; n];
    let mut basic = vec![vec![false; n]; n];

    northwest_corner(mu, nu, &mut flow, &mut basic);

    loop {
        let (u, v) = potentials(d, &basic);
        let entering = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !basic[i][j] && &(d.cost(i, j) - &u[i]) - &v[j] < Rational::zero());
        let Some((ei, ej)) = entering else { break };

        // Unique cycle: the entering edge plus the tree path from its row
        // node to its column node. Flow alternates -t, +t along the path.
        let path = tree_path(n, &basic, ei, n + ej);
        let mut minus_edges: Vec<(usize, usize)> = Vec::new();
        let mut edges_on_path: Vec<((usize, usize), bool)> = Vec::new();
        let mut sign_minus = true;
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (i, j) = if a < n { (a, b - n) } else { (b, a - n) };
            edges_on_path.push(((i, j), sign_minus));
            if sign_minus {
                minus_edges.push((i, j));
            }
            sign_minus = !sign_minus;
        }

        let step = minus_edges
            .iter()
            .map(|&(i, j)| flow[i][j].clone())
            .min()
            .expect("cycle always has a leaving candidate");
        let leaving = *minus_edges
            .iter()
            .filter(|&&(i, j)| flow[i][j] == step)
            .min_by_key(|&&(i, j)| i * n + j)
            .unwrap();

        for ((i, j), minus) in edges_on_path {
            if minus {
                flow[i][j] -= &step;
            } else {
                flow[i][j] += &step;
            }
        }
        flow[ei][ej] += &step;
        basic[ei][ej] = true;
        basic[leaving.0][leaving.1] = false;
        flow[leaving.0][leaving.1] = Rational::zero();
    }

    let mut value = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            if !flow[i][j].is_zero() {
                value += &(d.cost(i, j) * &flow[i][j]);
            }
        }
    }
    (value, TransportPlan::from_entries(flow))
}

/// Greedy staircase fill; visits exactly `2n - 1` cells, which form the
/// initial spanning-tree basis (possibly with zero-mass basic cells).
fn northwest_corner(
    mu: &Distribution,
    nu: &Distribution,
    flow: &mut [Vec<Rational>],
    basic: &mut [Vec<bool>],
) {
    let n = mu.n();
    let mut rem_col: Vec<Rational> = mu.masses().to_vec();
    let mut rem_row: Vec<Rational> = nu.masses().to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        let x = rem_row[i].clone().min(rem_col[j].clone());
        flow[i][j] = x.clone();
        basic[i][j] = true;
        rem_row[i] -= &x;
        rem_col[j] -= &x;
        if i == n - 1 && j == n - 1 {
            break;
        }
        if rem_row[i].is_zero() && i < n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
}

/// Dual potentials: `u[i] + v[j] = d[i][j]` on every basic edge, rooted at
/// `u[0] = 0`.
fn potentials(d: &GroundMetric, basic: &[Vec<bool>]) -> (Vec<Rational>, Vec<Rational>) {
    let n = d.n();
    let mut u = vec![None; n];
    let mut v = vec![None; n];
    u[0] = Some(Rational::zero());
    let mut queue = vec![0usize]; // node ids: 0..n rows, n..2n cols
    while let Some(node) = queue.pop() {
        if node < n {
            let i = node;
            let ui = u[i].clone().unwrap();
            for j in 0..n {
                if basic[i][j] && v[j].is_none() {
                    v[j] = Some(d.cost(i, j) - &ui);
                    queue.push(n + j);
                }
            }
        } else {
            let j = node - n;
            let vj = v[j].clone().unwrap();
            for i in 0..n {
                if basic[i][j] && u[i].is_none() {
                    u[i] = Some(d.cost(i, j) - &vj);
                    queue.push(i);
                }
            }
        }
    }
    (
        u.into_iter().map(Option::unwrap).collect(),
        v.into_iter().map(Option::unwrap).collect(),
    )
}

/// Node path between two nodes of the basis tree (row nodes `0..n`, column
/// nodes `n..2n`).
fn tree_path(n: usize, basic: &[Vec<bool>], from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; 2 * n];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for next in neighbors(n, basic, node) {
            if parent[next] == usize::MAX {
                parent[next] = node;
                queue.push_back(next);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn neighbors(n: usize, basic: &[Vec<bool>], node: usize) -> Vec<usize> {
    if node < n {
        (0..n).filter(|&j| basic[node][j]).map(|j| n + j).collect()
    } else {
        let j = node - n;
        (0..n).filter(|&i| basic[i][j]).collect()
    }
}
