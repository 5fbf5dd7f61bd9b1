//! Algebraic presentations of a triangulation: the prime decomposition of
//! its squarefree monomial ideal, and the cone of cost matrices inducing it.

use std::collections::BTreeSet;
use std::fmt;

use crate::exact::Rational;
use crate::triangulation::{TreeNav, Triangulation};

/// Renders the intersection of the prime components `<y_ij : ij not in
/// sigma>`, one component per line in canonical simplex order. Generators
/// are comma-separated inside angle brackets and named `yij` with one-based
/// indices, e.g. `<y12,y13,y31,y32>`.
pub fn to_monomial_ideal(t: &Triangulation) -> String {
    t.simplices()
        .iter()
        .map(|sigma| {
            let gens: Vec<String> = sigma
                .complement()
                .into_iter()
                .map(|(i, j)| format!("y{}{}", i + 1, j + 1))
                .collect();
            format!("<{}>", gens.join(","))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Strict linear inequality `sum coeff[i][j] * d[i][j] > 0` with integer
/// coefficients, one cycle of the triangulation's dual-feasibility test.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConeInequality {
    n: usize,
    coeffs: Vec<i8>,
}

impl ConeInequality {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        self.coeffs[i * self.n + j] as i64
    }

    /// Left-hand side value at a cost matrix (entries need not form a metric).
    pub fn evaluate(&self, cost: &[Vec<Rational>]) -> Rational {
        let mut acc = Rational::zero();
        for (p, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc += &(&Rational::from_int(c as i64) * &cost[p / self.n][p % self.n]);
            }
        }
        acc
    }

    pub fn holds_at(&self, cost: &[Vec<Rational>]) -> bool {
        self.evaluate(cost).is_positive()
    }
}

impl fmt::Display for ConeInequality {
    /// Positive terms on the left, negated ones on the right:
    /// `d12 + d21 > d11 + d22`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |sign: i8| {
            let terms: Vec<String> = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c.signum() == sign)
                .map(|(p, &c)| {
                    let name = format!("d{}{}", p / self.n + 1, p % self.n + 1);
                    if c.abs() == 1 {
                        name
                    } else {
                        format!("{}*{}", c.abs(), name)
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        write!(f, "{} > {}", side(1), side(-1))
    }
}

/// The open cone of cost matrices that induce the same triangulation,
/// presented by its (deduplicated) cycle inequalities.
#[derive(Clone, Debug)]
pub struct SecondaryCone {
    inequalities: Vec<ConeInequality>,
}

impl SecondaryCone {
    pub fn inequalities(&self) -> &[ConeInequality] {
        &self.inequalities
    }

    /// Membership test: the matrix lies in the open cone iff every
    /// inequality holds strictly.
    pub fn contains(&self, cost: &[Vec<Rational>]) -> bool {
        self.inequalities.iter().all(|ineq| ineq.holds_at(cost))
    }
}

/// Collects the reduced-cost inequality of every (simplex, non-tree edge)
/// pair, as integer-coefficient forms in the matrix entries, deduplicated.
pub fn secondary_cone(t: &Triangulation) -> SecondaryCone {
    let n = t.n();
    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    for sigma in t.simplices() {
        let nav = TreeNav::build(n, sigma.mask());
        for (i, j) in sigma.complement() {
            let mut coeffs = vec![0i8; n * n];
            coeffs[i * n + j] = 1;
            for (pos, minus) in nav.signed_path(i, j) {
                coeffs[pos] = if minus { -1 } else { 1 };
            }
            seen.insert(coeffs);
        }
    }
    SecondaryCone {
        inequalities: seen
            .into_iter()
            .map(|coeffs| ConeInequality { n, coeffs })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::GroundMetric;
    use crate::triangulation::regular_triangulation;

    #[test]
    fn two_state_ideal() {
        let t = regular_triangulation(&GroundMetric::discrete(2)).unwrap();
        let text = t.to_monomial_ideal();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.sort_unstable();
        assert_eq!(lines, vec!["<y12>", "<y21>"]);
    }

    #[test]
    fn three_state_ideal_contains_printed_component() {
        let t = regular_triangulation(&GroundMetric::discrete(3)).unwrap();
        let text = t.to_monomial_ideal();
        assert_eq!(text.lines().count(), 6);
        assert!(text.lines().any(|l| l == "<y12,y13,y31,y32>"));
    }

    #[test]
    fn discrete_cone_inequalities() {
        let d = GroundMetric::discrete(3);
        let t = regular_triangulation(&d).unwrap();
        let cone = t.secondary_cone();
        let rendered: Vec<String> = cone
            .inequalities()
            .iter()
            .map(|i| i.to_string())
            .collect();
        assert!(rendered.iter().any(|s| s == "d12 + d21 > d11 + d22"));
        assert!(rendered.iter().any(|s| s == "d23 + d32 > d22 + d33"));
        // self-consistency: the inducing metric lies in its own cone
        assert!(cone.contains(d.rows()));
        // zeroing d12 = d21 breaks the first inequality
        let mut broken = d.rows().to_vec();
        broken[0][1] = Rational::zero();
        broken[1][0] = Rational::zero();
        assert!(!cone.contains(&broken));
    }
}
