//! Regular triangulation of the product of two probability simplices induced
//! by a ground metric.
//!
//! The maximal simplices are exactly the spanning trees of the complete
//! bipartite graph on `[n] x [n]` whose tree basis is dual-feasible for the
//! transportation program: every non-tree edge must have a strictly positive
//! reduced cost. Degenerate metrics are handled by a deterministic symbolic
//! perturbation of the costs (`d[i][j] + eps^(i*n+j+1)` with `eps -> 0+`),
//! which breaks every tie; the result is always a triangulation with
//! `binomial(2n-2, n-1)` maximal simplices. Grouping simplices that share a
//! value functional recovers the coarser subdivision of the unperturbed
//! metric.

mod ideal;
pub(crate) mod trees;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{AffineForm, Rational};
use crate::transport::GroundMetric;

pub use ideal::{to_monomial_ideal, ConeInequality, SecondaryCone};

/// Maximal simplex of the triangulation, identified with a spanning tree of
/// the complete bipartite graph on `[n] x [n]`. Edges are `(row, column)`
/// pairs, zero-based, kept sorted; the derived order (lexicographic on the
/// sorted edge list) is the canonical order used everywhere downstream.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TreeSimplex {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeSimplex {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != 2 * n - 1 {
            return Err(Error::InvalidTree(format!(
                "expected {} distinct edges, got {}",
                2 * n - 1,
                edges.len()
            )));
        }
        if edges.iter().any(|&(i, j)| i >= n || j >= n) {
            return Err(Error::InvalidTree("edge index out of range".into()));
        }
        let mask = edges
            .iter()
            .fold(0u32, |m, &(i, j)| m | 1 << (i * n + j));
        let positions: Vec<usize> = (0..n * n).filter(|p| mask & (1 << p) != 0).collect();
        if !is_tree(n, &positions) {
            return Err(Error::InvalidTree(
                "edges do not form a spanning tree".into(),
            ));
        }
        Ok(TreeSimplex { n, edges })
    }

    pub(crate) fn from_mask(n: usize, mask: u32) -> Self {
        TreeSimplex {
            n,
            edges: trees::mask_edges(n, mask),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Edges of the complete bipartite graph not in this tree, ascending.
    pub fn complement(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.contains_edge(i, j))
            .collect()
    }

    pub(crate) fn mask(&self) -> u32 {
        self.edges
            .iter()
            .fold(0u32, |m, &(i, j)| m | 1 << (i * self.n + j))
    }
}

fn is_tree(n: usize, positions: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &pos in positions {
        let (a, b) = (pos / n, n + pos % n);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// The regular triangulation induced by a ground metric.
#[derive(Clone, Debug)]
pub struct Triangulation {
    n: usize,
    metric: GroundMetric,
    simplices: Vec<TreeSimplex>,
    perturbed: bool,
}

impl Triangulation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> &GroundMetric {
        &self.metric
    }

    /// Maximal simplices in canonical order.
    pub fn simplices(&self) -> &[TreeSimplex] {
        &self.simplices
    }

    /// True when the unperturbed metric admits a weakly-but-not-strictly
    /// feasible tree, i.e. the symbolic tie-break decided some membership.
    pub fn perturbed(&self) -> bool {
        self.perturbed
    }

    pub fn coarsen(&self) -> Vec<SubdivisionCell> {
        coarsen(self)
    }

    pub fn to_monomial_ideal(&self) -> String {
        ideal::to_monomial_ideal(self)
    }

    pub fn secondary_cone(&self) -> SecondaryCone {
        ideal::secondary_cone(self)
    }
}

/// Group of simplices sharing one value functional: a maximal cell of the
/// regular subdivision induced by the unperturbed metric.
#[derive(Clone, Debug)]
pub struct SubdivisionCell {
    /// Member simplices, canonically ordered.
    pub member_simplices: Vec<TreeSimplex>,
    /// Common value functional over `(mu_1..mu_n, nu_1..nu_n)`, reduced
    /// modulo the two simplex relations (variables `mu_n` and `nu_n`
    /// eliminated).
    pub value_functional: AffineForm,
}

/// Number of maximal simplices in any triangulation of the product of two
/// `(n-1)`-simplices: `binomial(2n-2, n-1)`.
pub fn expected_simplex_count(n: usize) -> usize {
    let (mut num, mut den) = (1usize, 1usize);
    for k in 1..n {
        num *= n - 1 + k;
        den *= k;
    }
    num / den
}

/// All spanning trees of the complete bipartite graph on `[n] x [n]`, each
/// exactly once, in canonical order. Exhaustive, so `2 <= n <= 5`.
pub fn enumerate_spanning_trees(n: usize) -> Result<Vec<TreeSimplex>> {
    let masks = trees::spanning_tree_masks(n)?;
    Ok(masks
        .iter()
        .map(|&m| TreeSimplex::from_mask(n, m))
        .collect())
}

/// Reduced cost of a non-tree edge against the tree basis, unperturbed.
///
/// Traversing the tree path from the edge's row node to its column node, the
/// tree costs enter with alternating signs starting negative, and the edge
/// itself contributes `+d[edge]`. Strict positivity for every non-tree edge
/// certifies that the basis is optimal wherever its solved plan is feasible.
pub fn reduced_cost(
    sigma: &TreeSimplex,
    d: &GroundMetric,
    edge: (usize, usize),
) -> Result<Rational> {
    if sigma.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "tree on [{}] x [{}] against a {}x{} metric",
            sigma.n(),
            sigma.n(),
            d.n(),
            d.n()
        )));
    }
    if sigma.contains_edge(edge.0, edge.1) {
        return Err(Error::EdgeInTree(edge.0, edge.1));
    }
    let n = sigma.n();
    let nav = TreeNav::build(n, sigma.mask());
    let mut acc = d.cost(edge.0, edge.1).clone();
    for (pos, minus) in nav.signed_path(edge.0, edge.1) {
        let c = d.cost(pos / n, pos % n);
        if minus {
            acc -= c;
        } else {
            acc += c;
        }
    }
    Ok(acc)
}

/// Builds the regular triangulation of the product of simplices induced by
/// `d`, breaking ties with the symbolic perturbation described at module
/// level. The result always has `binomial(2n-2, n-1)` simplices.
pub fn regular_triangulation(d: &GroundMetric) -> Result<Triangulation> {
    let n = d.n();
    let masks = trees::spanning_tree_masks(n)?;
    let costs = ScaledCosts::from_metric(d);

    let classified: Vec<(u32, TreeClass)> = masks
        .par_iter()
        .map(|&mask| (mask, classify_tree(n, mask, &costs)))
        .collect();

    let mut perturbed = false;
    let mut accepted = Vec::new();
    for (mask, class) in classified {
        match class {
            TreeClass::Rejected => {}
            TreeClass::Strict => accepted.push(mask),
            TreeClass::Tied { accepted: ok } => {
                perturbed = true;
                if ok {
                    accepted.push(mask);
                }
            }
        }
    }

    let mut simplices: Vec<TreeSimplex> = accepted
        .into_iter()
        .map(|m| TreeSimplex::from_mask(n, m))
        .collect();
    simplices.sort();
    debug_assert_eq!(simplices.len(), expected_simplex_count(n));
    Ok(Triangulation {
        n,
        metric: d.clone(),
        simplices,
        perturbed,
    })
}

/// The linear form `(mu, nu) -> sum d[i][j] * plan[i][j]` of the tree basis,
/// over variables `0..n` for `mu` and `n..2n` for `nu`.
pub fn value_functional(sigma: &TreeSimplex, d: &GroundMetric) -> AffineForm {
    let plan = symbolic_plan(sigma);
    let mut acc = AffineForm::zero();
    for &(i, j) in sigma.edges() {
        acc = acc.add(&plan[i][j].scale(d.cost(i, j)));
    }
    acc
}

/// Solves the tree system with both marginals symbolic: entry `(i, j)` is an
/// affine form over `(mu_1..mu_n, nu_1..nu_n)` (variables `0..n` then
/// `n..2n`); entries off the tree are zero forms.
pub fn symbolic_plan(sigma: &TreeSimplex) -> Vec<Vec<AffineForm>> {
    let n = sigma.n();
    tree_plan_entries(
        sigma,
        |j| AffineForm::variable(j),
        |i| AffineForm::variable(n + i),
    )
}

/// Shared solver for tree systems: every tree edge separates the tree into
/// two components, and the entry equals the net marginal imbalance of either
/// side. The side with fewer nodes is used (ties: the side containing row
/// node 1), which matches the natural by-hand solution.
pub(crate) fn tree_plan_entries<FM, FN>(
    sigma: &TreeSimplex,
    col_form: FM,
    row_form: FN,
) -> Vec<Vec<AffineForm>>
where
    FM: Fn(usize) -> AffineForm,
    FN: Fn(usize) -> AffineForm,
{
    let n = sigma.n();
    let mut entries = vec![vec![AffineForm::zero(); n]; n];
    for &(i, j) in sigma.edges() {
        let row_side = component_without(sigma, i, (i, j));
        let col_side: Vec<usize> = (0..2 * n).filter(|v| !row_side.contains(v)).collect();
        let use_row_side = match row_side.len().cmp(&col_side.len()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => row_side.contains(&0),
        };
        let side = if use_row_side { &row_side } else { &col_side };
        // Net flow across the cut: sum of column marginals minus sum of row
        // marginals on the column side (negated on the row side).
        let mut form = AffineForm::zero();
        for &node in side {
            if node < n {
                form = form.sub(&row_form(node));
            } else {
                form = form.add(&col_form(node - n));
            }
        }
        entries[i][j] = if use_row_side { form.neg() } else { form };
    }
    entries
}

/// Nodes of the component of `sigma` minus `cut` that contains row node
/// `start` (node ids: rows `0..n`, columns `n..2n`).
fn component_without(sigma: &TreeSimplex, start: usize, cut: (usize, usize)) -> Vec<usize> {
    let n = sigma.n();
    let mut seen = vec![false; 2 * n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(node) = stack.pop() {
        for &(i, j) in sigma.edges() {
            if (i, j) == cut {
                continue;
            }
            let (a, b) = (i, n + j);
            let next = if a == node {
                b
            } else if b == node {
                a
            } else {
                continue;
            };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    (0..2 * n).filter(|&v| seen[v]).collect()
}

/// Groups the simplices by exact equality of their value functionals (as
/// linear forms modulo the two simplex relations), recovering the maximal
/// cells of the regular subdivision induced by the unperturbed metric.
pub fn coarsen(t: &Triangulation) -> Vec<SubdivisionCell> {
    let n = t.n();
    let mut groups: BTreeMap<AffineForm, Vec<TreeSimplex>> = BTreeMap::new();
    for sigma in t.simplices() {
        let reduced = reduce_mod_simplex(&value_functional(sigma, t.metric()), n);
        groups.entry(reduced).or_default().push(sigma.clone());
    }
    let mut cells: Vec<SubdivisionCell> = groups
        .into_iter()
        .map(|(value_functional, member_simplices)| SubdivisionCell {
            member_simplices,
            value_functional,
        })
        .collect();
    cells.sort_by(|a, b| a.member_simplices[0].cmp(&b.member_simplices[0]));
    cells
}

/// Canonical representative of a form over `(mu, nu)` modulo
/// `sum(mu) = sum(nu) = 1`: eliminates `mu_n` and `nu_n`.
pub fn reduce_mod_simplex(form: &AffineForm, n: usize) -> AffineForm {
    let mut mu_last = AffineForm::constant(Rational::one());
    for i in 0..n - 1 {
        mu_last.add_term(i, &Rational::of(-1, 1));
    }
    let mut nu_last = AffineForm::constant(Rational::one());
    for i in n..2 * n - 1 {
        nu_last.add_term(i, &Rational::of(-1, 1));
    }
    form.substitute(n - 1, &mu_last).substitute(2 * n - 1, &nu_last)
}

enum ScaledCosts {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl ScaledCosts {
    /// Clears denominators with their lcm; the integer costs preserve every
    /// reduced-cost sign. Falls back to big integers when the scaled values
    /// could overflow an alternating sum of `2n` terms in `i128`.
    fn from_metric(d: &GroundMetric) -> ScaledCosts {
        let n = d.n();
        let mut lcm = BigInt::from(1);
        for i in 0..n {
            for j in 0..n {
                lcm = num_integer::lcm(lcm, d.cost(i, j).denom().clone());
            }
        }
        let scaled: Vec<BigInt> = (0..n * n)
            .map(|p| {
                let c = d.cost(p / n, p % n);
                c.numer() * (&lcm / c.denom())
            })
            .collect();
        let bound = i128::MAX / 64;
        let small: Option<Vec<i128>> = scaled
            .iter()
            .map(|v| v.to_i128().filter(|x| x.abs() < bound))
            .collect();
        match small {
            Some(values) => ScaledCosts::Small(values),
            None => ScaledCosts::Big(scaled),
        }
    }
}

enum TreeClass {
    /// Some reduced cost is strictly negative.
    Rejected,
    /// Every reduced cost is strictly positive.
    Strict,
    /// All reduced costs nonnegative, at least one zero; membership was
    /// decided by the symbolic perturbation.
    Tied { accepted: bool },
}

fn classify_tree(n: usize, mask: u32, costs: &ScaledCosts) -> TreeClass {
    match costs {
        ScaledCosts::Small(c) => classify_tree_generic(n, mask, c),
        ScaledCosts::Big(c) => classify_tree_generic(n, mask, c),
    }
}

fn classify_tree_generic<T>(n: usize, mask: u32, costs: &[T]) -> TreeClass
where
    T: Clone + Ord + Zero + for<'a> std::ops::AddAssign<&'a T> + for<'a> std::ops::SubAssign<&'a T>,
{
    let nav = TreeNav::build(n, mask);
    let zero = T::zero();
    let mut ties: Vec<(usize, usize)> = Vec::new();
    for p in 0..n * n {
        if mask & (1 << p) != 0 {
            continue;
        }
        let (i, j) = (p / n, p % n);
        let mut acc = costs[p].clone();
        for (pos, minus) in nav.signed_path(i, j) {
            if minus {
                acc -= &costs[pos];
            } else {
                acc += &costs[pos];
            }
        }
        match acc.cmp(&zero) {
            std::cmp::Ordering::Less => return TreeClass::Rejected,
            std::cmp::Ordering::Equal => ties.push((i, j)),
            std::cmp::Ordering::Greater => {}
        }
    }
    if ties.is_empty() {
        return TreeClass::Strict;
    }
    let accepted = ties
        .iter()
        .all(|&(i, j)| perturbation_sign_positive(n, &nav, i, j));
    TreeClass::Tied { accepted }
}

/// Sign of the perturbed reduced cost when the unperturbed one vanishes: the
/// perturbation weights position `p` by `eps^(p+1)`, so the lowest position
/// with a nonzero multiplicity decides as `eps -> 0+`.
fn perturbation_sign_positive(n: usize, nav: &TreeNav, i: usize, j: usize) -> bool {
    let mut mult = [0i8; 25];
    mult[i * n + j] = 1;
    for (pos, minus) in nav.signed_path(i, j) {
        mult[pos] = if minus { -1 } else { 1 };
    }
    for &m in mult.iter().take(n * n) {
        if m != 0 {
            return m > 0;
        }
    }
    unreachable!("perturbation multiplicities cannot all vanish")
}

/// Rooted view of a spanning tree: parent pointers from a breadth-first
/// search at row node 0, used to extract paths without allocation-heavy
/// searches.
pub(crate) struct TreeNav {
    n: usize,
    parent_node: [usize; 10],
    parent_pos: [usize; 10],
    depth: [u8; 10],
}

impl TreeNav {
    pub(crate) fn build(n: usize, mask: u32) -> TreeNav {
        let mut adj: [([usize; 5], [usize; 5], usize); 10] =
            [([0; 5], [0; 5], 0); 10];
        for p in 0..n * n {
            if mask & (1 << p) == 0 {
                continue;
            }
            let (a, b) = (p / n, n + p % n);
            let (nbrs, poss, len) = &mut adj[a];
            nbrs[*len] = b;
            poss[*len] = p;
            *len += 1;
            let (nbrs, poss, len) = &mut adj[b];
            nbrs[*len] = a;
            poss[*len] = p;
            *len += 1;
        }
        let mut nav = TreeNav {
            n,
            parent_node: [usize::MAX; 10],
            parent_pos: [usize::MAX; 10],
            depth: [0; 10],
        };
        let mut queue = [0usize; 10];
        let (mut head, mut tail) = (0, 1);
        nav.parent_node[0] = 0;
        while head < tail {
            let node = queue[head];
            head += 1;
            let (nbrs, poss, len) = &adj[node];
            for k in 0..*len {
                let next = nbrs[k];
                if nav.parent_node[next] == usize::MAX {
                    nav.parent_node[next] = node;
                    nav.parent_pos[next] = poss[k];
                    nav.depth[next] = nav.depth[node] + 1;
                    queue[tail] = next;
                    tail += 1;
                }
            }
        }
        nav
    }

    /// Tree path from row node `i` to column node `j`, as edge positions
    /// paired with their alternating sign (`true` = minus), starting with a
    /// minus on the edge incident to the row node.
    pub(crate) fn signed_path(&self, i: usize, j: usize) -> Vec<(usize, bool)> {
        let (mut a, mut b) = (i, self.n + j);
        let mut from_a: Vec<usize> = Vec::new();
        let mut from_b: Vec<usize> = Vec::new();
        while self.depth[a] > self.depth[b] {
            from_a.push(self.parent_pos[a]);
            a = self.parent_node[a];
        }
        while self.depth[b] > self.depth[a] {
            from_b.push(self.parent_pos[b]);
            b = self.parent_node[b];
        }
        while a != b {
            from_a.push(self.parent_pos[a]);
            a = self.parent_node[a];
            from_b.push(self.parent_pos[b]);
            b = self.parent_node[b];
        }
        from_a
            .into_iter()
            .chain(from_b.into_iter().rev())
            .enumerate()
            .map(|(k, pos)| (pos, k % 2 == 0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_simplex_count(2), 2);
        assert_eq!(expected_simplex_count(3), 6);
        assert_eq!(expected_simplex_count(4), 20);
        assert_eq!(expected_simplex_count(5), 70);
    }

    #[test]
    fn tree_simplex_validation() {
        assert!(TreeSimplex::new(2, vec![(0, 0), (0, 1), (1, 1)]).is_ok());
        // cycle plus isolated node
        assert!(TreeSimplex::new(2, vec![(0, 0), (0, 1), (1, 0)]).is_ok());
        assert!(TreeSimplex::new(2, vec![(0, 0), (0, 1)]).is_err());
        assert!(TreeSimplex::new(2, vec![(0, 0), (0, 1), (2, 1)]).is_err());
    }

    #[test]
    fn reduced_cost_follows_sign_convention() {
        // n = 2, tree {(1,1),(1,2),(2,2)} one-based, entering edge (2,1):
        // d21 - d11 + d12 - d22 = 2 for the discrete metric.
        let sigma = TreeSimplex::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let d = GroundMetric::discrete(2);
        assert_eq!(reduced_cost(&sigma, &d, (1, 0)).unwrap(), r(2, 1));
        assert!(matches!(
            reduced_cost(&sigma, &d, (0, 0)),
            Err(Error::EdgeInTree(0, 0))
        ));
        // zero metric: every reduced cost vanishes
        let z = GroundMetric::zero(2);
        assert!(reduced_cost(&sigma, &z, (1, 0)).unwrap().is_zero());
    }

    #[test]
    fn reduced_cost_on_three_state_tree_is_positive() {
        // Tree with complement {y12, y13, y31, y32}; entering edge (1,2)
        // closes the 4-cycle through (1,1), (2,1), (2,2):
        // d12 - d11 + d21 - d22 = 2 for the discrete metric.
        let sigma =
            TreeSimplex::new(3, vec![(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)]).unwrap();
        let d = GroundMetric::discrete(3);
        let rc = reduced_cost(&sigma, &d, (0, 1)).unwrap();
        assert!(rc.is_positive());
        assert_eq!(rc, r(2, 1));
    }

    #[test]
    fn value_functional_simplifies_to_printed_form() {
        // Second prime of the two-bit decomposition: the raw functional is
        // mu1 + 2 mu2 + mu4 - nu1 - 2 nu2 - nu4, which reduces modulo the
        // simplex relations to mu2 - mu3 - nu2 + nu3.
        let complement = [
            (0usize, 0usize),
            (0, 2),
            (0, 3),
            (1, 0),
            (1, 2),
            (1, 3),
            (3, 0),
            (3, 2),
            (3, 3),
        ];
        let edges = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|e| !complement.contains(e))
            .collect();
        let sigma = TreeSimplex::new(4, edges).unwrap();
        let d = GroundMetric::hamming_2bit();
        let raw = value_functional(&sigma, &d);
        let mut expected_raw = AffineForm::zero();
        for (var, coeff) in [(0, 1), (1, 2), (3, 1), (4, -1), (5, -2), (7, -1)] {
            expected_raw.add_term(var, &r(coeff, 1));
        }
        assert_eq!(raw, expected_raw);
        let mut printed = AffineForm::zero();
        for (var, coeff) in [(1, 1), (2, -1), (5, -1), (6, 1)] {
            printed.add_term(var, &r(coeff, 1));
        }
        assert_eq!(reduce_mod_simplex(&raw, 4), reduce_mod_simplex(&printed, 4));
    }

    #[test]
    fn discrete_two_gives_two_simplices() {
        let t = regular_triangulation(&GroundMetric::discrete(2)).unwrap();
        assert_eq!(t.simplices().len(), 2);
        assert!(!t.perturbed());
    }

    #[test]
    fn discrete_three_matches_prime_decomposition() {
        let t = regular_triangulation(&GroundMetric::discrete(3)).unwrap();
        assert_eq!(t.simplices().len(), 6);
        assert!(!t.perturbed());
        // complements, one-based, from the printed decomposition
        let expected: Vec<Vec<(usize, usize)>> = vec![
            vec![(1, 2), (1, 3), (2, 1), (2, 3)],
            vec![(1, 2), (1, 3), (2, 3), (3, 2)],
            vec![(1, 2), (1, 3), (3, 1), (3, 2)],
            vec![(1, 2), (2, 1), (3, 1), (3, 2)],
            vec![(1, 3), (2, 1), (2, 3), (3, 1)],
            vec![(2, 1), (2, 3), (3, 1), (3, 2)],
        ];
        let got: std::collections::BTreeSet<Vec<(usize, usize)>> = t
            .simplices()
            .iter()
            .map(|s| {
                s.complement()
                    .into_iter()
                    .map(|(i, j)| (i + 1, j + 1))
                    .collect()
            })
            .collect();
        let want: std::collections::BTreeSet<Vec<(usize, usize)>> =
            expected.into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn zero_metric_is_fully_tied() {
        let t = regular_triangulation(&GroundMetric::zero(3)).unwrap();
        assert_eq!(t.simplices().len(), 6);
        assert!(t.perturbed());
    }

    #[test]
    fn value_functional_solves_the_tree_system() {
        // n = 2, tree {(1,1),(1,2),(2,2)}: entries mu1, nu1 - mu1, nu2.
        let sigma = TreeSimplex::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let plan = symbolic_plan(&sigma);
        assert_eq!(plan[0][0], AffineForm::variable(0));
        let mut expect01 = AffineForm::variable(2);
        expect01.add_term(0, &r(-1, 1));
        assert_eq!(plan[0][1], expect01);
        assert_eq!(plan[1][1], AffineForm::variable(3));
        // zero metric: zero functional for any tree
        let z = GroundMetric::zero(2);
        assert!(value_functional(&sigma, &z).is_zero());
    }

    #[test]
    fn coarsening_discrete_metrics() {
        for (n, cells) in [(3usize, 6usize), (4, 14)] {
            let t = regular_triangulation(&GroundMetric::discrete(n)).unwrap();
            let coarse = t.coarsen();
            assert_eq!(coarse.len(), cells, "n = {n}");
            let total: usize = coarse.iter().map(|c| c.member_simplices.len()).sum();
            assert_eq!(total, t.simplices().len());
        }
    }
}
