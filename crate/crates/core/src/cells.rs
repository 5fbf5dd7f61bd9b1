//! Per-simplex problems for a fixed first marginal: the transport-plan
//! template with entries affine in the second marginal, its nonnegativity
//! constraints, and the linear objective.

use crate::error::{Error, Result};
use crate::exact::{AffineForm, Rational};
use crate::transport::{Distribution, GroundMetric};
use crate::triangulation::{tree_plan_entries, TreeSimplex};

/// Solution of the tree system with `mu` fixed and `nu` symbolic: an
/// `n x n` matrix of affine forms in the variables `nu_1..nu_n` (indices
/// `0..n`), zero off the tree support. Column sums reproduce `mu` and row
/// sums reproduce `nu` identically modulo `sum(nu) = 1`.
#[derive(Clone, Debug)]
pub struct PlanTemplate {
    sigma: TreeSimplex,
    mu: Distribution,
    entries: Vec<Vec<AffineForm>>,
}

impl PlanTemplate {
    pub fn sigma(&self) -> &TreeSimplex {
        &self.sigma
    }

    pub fn mu(&self) -> &Distribution {
        &self.mu
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineForm {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<AffineForm>] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.mu.n()
    }
}

/// Unique affine solution of the tree system for fixed `mu`.
pub fn plan_template(sigma: &TreeSimplex, mu: &Distribution) -> Result<PlanTemplate> {
    if sigma.n() != mu.n() {
        return Err(Error::DimensionMismatch(format!(
            "tree on [{}] x [{}] with a marginal of length {}",
            sigma.n(),
            sigma.n(),
            mu.n()
        )));
    }
    let entries = tree_plan_entries(
        sigma,
        |j| AffineForm::constant(mu.get(j).clone()),
        AffineForm::variable,
    );
    Ok(PlanTemplate {
        sigma: sigma.clone(),
        mu: mu.clone(),
        entries,
    })
}

/// Linear minimization problem of one simplex at fixed `mu`: minimize the
/// objective over the `nu` for which every template entry is nonnegative.
#[derive(Clone, Debug)]
pub struct CellProblem {
    template: PlanTemplate,
    objective: AffineForm,
    constraints: Vec<AffineForm>,
    infeasible_constant: bool,
    cell_id: usize,
}

impl CellProblem {
    pub fn template(&self) -> &PlanTemplate {
        &self.template
    }

    pub fn sigma(&self) -> &TreeSimplex {
        self.template.sigma()
    }

    /// `sum d[i][j] * entry[i][j]`, an affine form in `nu`.
    pub fn objective(&self) -> &AffineForm {
        &self.objective
    }

    /// The non-constant nonnegativity constraints (each required `>= 0`).
    /// Constant entries are resolved at construction: a negative one marks
    /// the whole cell infeasible, a nonnegative one is dropped.
    pub fn constraints(&self) -> &[AffineForm] {
        &self.constraints
    }

    /// True when some constant template entry is negative, so the cell meets
    /// no distribution at all.
    pub fn is_constant_infeasible(&self) -> bool {
        self.infeasible_constant
    }

    /// Position of the cell in its triangulation's canonical order.
    pub fn cell_id(&self) -> usize {
        self.cell_id
    }

    pub fn with_cell_id(mut self, id: usize) -> Self {
        self.cell_id = id;
        self
    }
}

/// Assembles objective and constraints for one simplex at fixed `mu`.
pub fn cell_problem(
    sigma: &TreeSimplex,
    mu: &Distribution,
    d: &GroundMetric,
) -> Result<CellProblem> {
    if d.n() != sigma.n() {
        return Err(Error::DimensionMismatch(format!(
            "tree on [{}] x [{}] against a {}x{} metric",
            sigma.n(),
            sigma.n(),
            d.n(),
            d.n()
        )));
    }
    let template = plan_template(sigma, mu)?;
    let mut objective = AffineForm::zero();
    let mut constraints = Vec::new();
    let mut infeasible_constant = false;
    for &(i, j) in sigma.edges() {
        let entry = template.entry(i, j);
        objective = objective.add(&entry.scale(d.cost(i, j)));
        if entry.is_constant() {
            if entry.constant_term().is_negative() {
                infeasible_constant = true;
            }
        } else {
            constraints.push(entry.clone());
        }
    }
    Ok(CellProblem {
        template,
        objective,
        constraints,
        infeasible_constant,
        cell_id: 0,
    })
}

/// Sum of the per-coordinate absolute marginal violations of `nu` by the
/// template evaluated at `nu`; zero means the evaluated plan is the basic
/// solution for `(mu, nu)`.
pub fn marginal_defect(template: &PlanTemplate, nu: &[Rational]) -> Rational {
    let n = template.n();
    let mut defect = Rational::zero();
    for j in 0..n {
        let mut col = Rational::zero();
        for i in 0..n {
            col += &template.entry(i, j).eval(nu);
        }
        defect += &(col - template.mu().get(j).clone()).abs();
    }
    for i in 0..n {
        let mut row = Rational::zero();
        for j in 0..n {
            row += &template.entry(i, j).eval(nu);
        }
        defect += &(row - nu[i].clone()).abs();
    }
    defect
}
