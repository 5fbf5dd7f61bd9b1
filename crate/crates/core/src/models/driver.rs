//! End-to-end distance from a distribution to a parametric model: specialize
//! every simplex of the metric's triangulation at the fixed first marginal,
//! minimize each composed cell objective over the model parameters, and take
//! the smallest feasible cell minimum.

use rayon::prelude::*;

use crate::cells::{cell_problem, plan_template};
use crate::error::{Error, Result};
use crate::exact::{Polynomial, QuadraticNumber};
use crate::models::exact_engine::{feasible_minimum, minimize_cell_exact, Candidate, Provenance};
use crate::models::numeric_engine::{minimize_cell_numeric, NumericConfig};
use crate::models::{compose_cell, ParametricModel, Value};
use crate::transport::{Distribution, GroundMetric};
use crate::triangulation::{regular_triangulation, Triangulation};

/// Which minimization engine drives the per-cell subproblems.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Engine {
    /// Closed-form candidates; falls back to numeric per cell when a cell
    /// exceeds the exact engine's degree or arity bounds.
    Exact,
    /// Grid scan with refinement, flagged heuristic.
    Numeric,
}

#[derive(Clone, Debug)]
pub struct ModelDistanceConfig {
    pub engine: Engine,
    pub numeric: NumericConfig,
    /// Absolute tie tolerance for grouping minima when floats are involved;
    /// exact values tie only on exact equality.
    pub tie_tol: f64,
}

impl Default for ModelDistanceConfig {
    fn default() -> Self {
        ModelDistanceConfig {
            engine: Engine::Exact,
            numeric: NumericConfig::default(),
            tie_tol: 1e-9,
        }
    }
}

/// Engine actually used on one cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowEngine {
    Exact,
    Numeric,
    /// Exact was requested but the cell exceeded its bounds.
    NumericFallback,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Feasible,
    Infeasible,
}

/// Per-cell analysis row.
#[derive(Clone, Debug)]
pub struct CellReport {
    pub cell_id: usize,
    /// Composed objective as a polynomial in the model parameters.
    pub objective: Polynomial,
    pub status: CellStatus,
    pub engine: RowEngine,
    pub candidates: Vec<Candidate>,
    /// Minimum over the feasible candidates; `None` for infeasible cells.
    pub minimum: Option<Value>,
}

/// One row per cell of the triangulation, in canonical cell order.
#[derive(Clone, Debug)]
pub struct PiecewiseReport {
    pub rows: Vec<CellReport>,
}

impl PiecewiseReport {
    /// Smallest feasible per-cell minimum.
    pub fn global_minimum(&self) -> Option<Value> {
        self.rows
            .iter()
            .filter_map(|r| r.minimum.clone())
            .min_by(|a, b| a.compare(b))
    }
}

/// A distinct minimizing parameter point.
#[derive(Clone, Debug)]
pub struct Minimizer {
    pub theta: Vec<Value>,
    /// Image of `theta` under the model map.
    pub nu: Vec<Value>,
    /// Cells whose minimum is attained at this point, ascending.
    pub cell_ids: Vec<usize>,
    /// Transport plan of the first such cell evaluated at `nu`, as sparse
    /// `(row, column, mass)` triples over the tree support.
    pub plan: Vec<(usize, usize, Value)>,
}

/// Result of the full minimization.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub value: Value,
    /// Distinct minimizing points, deduplicated across cells.
    pub minimizers: Vec<Minimizer>,
}

impl Optimum {
    /// Union of the attaining cells over all minimizers, ascending.
    pub fn attaining_cells(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = self
            .minimizers
            .iter()
            .flat_map(|m| m.cell_ids.iter().copied())
            .collect();
        cells.sort_unstable();
        cells.dedup();
        cells
    }
}

/// Computes the distance from `mu` to the model and the per-cell report.
///
/// Iterates the cells of the metric's triangulation in canonical order;
/// per-cell minimization runs in parallel and the merge is deterministic.
/// Ties across cells are reported together: every cell whose minimum equals
/// the global one contributes, and minimizing points are deduplicated.
pub fn model_distance(
    d: &GroundMetric,
    mu: &Distribution,
    model: &ParametricModel,
    config: &ModelDistanceConfig,
) -> Result<(Optimum, PiecewiseReport)> {
    let triangulation = regular_triangulation(d)?;
    model_distance_with(&triangulation, mu, model, config)
}

/// Same as [`model_distance`] with a precomputed triangulation.
pub fn model_distance_with(
    triangulation: &Triangulation,
    mu: &Distribution,
    model: &ParametricModel,
    config: &ModelDistanceConfig,
) -> Result<(Optimum, PiecewiseReport)> {
    let d = triangulation.metric();
    if model.n() != d.n() || mu.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "metric on {} states, marginal of length {}, model into dimension {}",
            d.n(),
            mu.n(),
            model.n()
        )));
    }

    let rows: Result<Vec<CellReport>> = triangulation
        .simplices()
        .par_iter()
        .enumerate()
        .map(|(cell_id, sigma)| {
            let cell = cell_problem(sigma, mu, d)?.with_cell_id(cell_id);
            let (objective, constraints) = compose_cell(model, &cell)?;
            if cell.is_constant_infeasible() {
                return Ok(CellReport {
                    cell_id,
                    objective,
                    status: CellStatus::Infeasible,
                    engine: RowEngine::Exact,
                    candidates: Vec::new(),
                    minimum: None,
                });
            }
            let (engine, candidates) = match config.engine {
                Engine::Exact => {
                    match minimize_cell_exact(&objective, &constraints, model.domain()) {
                        Ok(c) => (RowEngine::Exact, c),
                        Err(Error::Capability(_)) => (
                            RowEngine::NumericFallback,
                            numeric_candidates(&objective, &constraints, model, config),
                        ),
                        Err(e) => return Err(e),
                    }
                }
                Engine::Numeric => (
                    RowEngine::Numeric,
                    numeric_candidates(&objective, &constraints, model, config),
                ),
            };
            let minimum = feasible_minimum(&candidates);
            Ok(CellReport {
                cell_id,
                objective,
                status: if minimum.is_some() {
                    CellStatus::Feasible
                } else {
                    CellStatus::Infeasible
                },
                engine,
                candidates,
                minimum,
            })
        })
        .collect();
    let rows = rows?;
    let report = PiecewiseReport { rows };

    let global = report.global_minimum().ok_or_else(|| {
        Error::NumericInfeasible("no cell admits a feasible point of the model".into())
    })?;

    let minimizers = collect_minimizers(triangulation, mu, model, &report, &global, config)?;
    Ok((
        Optimum {
            value: global,
            minimizers,
        },
        report,
    ))
}

fn numeric_candidates(
    objective: &Polynomial,
    constraints: &[Polynomial],
    model: &ParametricModel,
    config: &ModelDistanceConfig,
) -> Vec<Candidate> {
    match minimize_cell_numeric(objective, constraints, model.domain(), &config.numeric) {
        Ok((theta, value)) => vec![Candidate {
            theta: theta.into_iter().map(Value::Float).collect(),
            value: Value::Float(value),
            provenance: Provenance::NumericScan,
            feasible: true,
        }],
        Err(_) => Vec::new(),
    }
}

fn collect_minimizers(
    triangulation: &Triangulation,
    mu: &Distribution,
    model: &ParametricModel,
    report: &PiecewiseReport,
    global: &Value,
    config: &ModelDistanceConfig,
) -> Result<Vec<Minimizer>> {
    // Gather (theta, cell) pairs attaining the global minimum.
    let mut hits: Vec<(&Candidate, usize)> = Vec::new();
    for row in &report.rows {
        let Some(min) = &row.minimum else { continue };
        if !min.ties_with(global, config.tie_tol) {
            continue;
        }
        for cand in &row.candidates {
            if cand.feasible && cand.value.ties_with(global, config.tie_tol) {
                hits.push((cand, row.cell_id));
            }
        }
    }

    let mut minimizers: Vec<Minimizer> = Vec::new();
    for (cand, cell_id) in hits {
        if let Some(existing) = minimizers
            .iter_mut()
            .find(|m| same_point(&m.theta, &cand.theta, config.tie_tol))
        {
            if !existing.cell_ids.contains(&cell_id) {
                existing.cell_ids.push(cell_id);
            }
            continue;
        }
        let nu = image_point(model, &cand.theta)?;
        minimizers.push(Minimizer {
            theta: cand.theta.clone(),
            nu,
            cell_ids: vec![cell_id],
            plan: Vec::new(),
        });
    }
    for m in &mut minimizers {
        m.cell_ids.sort_unstable();
        m.plan = plan_at(triangulation, mu, m)?;
    }
    Ok(minimizers)
}

fn same_point(a: &[Value], b: &[Value], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.ties_with(y, tol))
}

fn image_point(model: &ParametricModel, theta: &[Value]) -> Result<Vec<Value>> {
    if theta.iter().all(Value::is_exact) {
        let point: Vec<QuadraticNumber> = theta
            .iter()
            .map(|v| v.as_exact().unwrap().clone())
            .collect();
        Ok(model
            .evaluate_quadratic(&point)?
            .into_iter()
            .map(Value::Exact)
            .collect())
    } else {
        let point: Vec<f64> = theta.iter().map(Value::to_f64).collect();
        Ok(model
            .evaluate_f64(&point)
            .into_iter()
            .map(Value::Float)
            .collect())
    }
}

/// Transport plan of the minimizer's first attaining cell, evaluated at its
/// image point: sparse triples over the tree support (zero entries included,
/// since the support is the basis, not the positive part).
fn plan_at(
    triangulation: &Triangulation,
    mu: &Distribution,
    minimizer: &Minimizer,
) -> Result<Vec<(usize, usize, Value)>> {
    let sigma = &triangulation.simplices()[minimizer.cell_ids[0]];
    let template = plan_template(sigma, mu)?;
    let mut plan = Vec::new();
    if minimizer.nu.iter().all(Value::is_exact) {
        let nu: Vec<QuadraticNumber> = minimizer
            .nu
            .iter()
            .map(|v| v.as_exact().unwrap().clone())
            .collect();
        for &(i, j) in sigma.edges() {
            plan.push((i, j, Value::Exact(template.entry(i, j).eval_quadratic(&nu))));
        }
    } else {
        let nu: Vec<f64> = minimizer.nu.iter().map(Value::to_f64).collect();
        for &(i, j) in sigma.edges() {
            plan.push((i, j, Value::Float(template.entry(i, j).eval_f64(&nu))));
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    #[test]
    fn headline_three_state_distance() {
        // Discrete metric, mu = (1/2, 1/7, 5/14), quadratic curve model:
        // distance sqrt(2) - 8/7 at p = sqrt(1/2), attained on two cells.
        let d = GroundMetric::discrete(3);
        let mu = Distribution::new(vec![r(1, 2), r(1, 7), r(5, 14)]).unwrap();
        let model = ParametricModel::hardy_weinberg();
        let (opt, report) =
            model_distance(&d, &mu, &model, &ModelDistanceConfig::default()).unwrap();
        let expected = QuadraticNumber::new(r(-8, 7), r(1, 1), r(2, 1)).unwrap();
        assert_eq!(opt.value.as_exact().unwrap(), &expected);
        assert_eq!(opt.minimizers.len(), 1);
        let m = &opt.minimizers[0];
        let pstar = QuadraticNumber::sqrt(r(1, 2)).unwrap();
        assert_eq!(m.theta[0].as_exact().unwrap(), &pstar);
        assert_eq!(opt.attaining_cells().len(), 2);
        assert_eq!(report.rows.len(), 6);
        // exactly one infeasible cell
        let infeasible = report
            .rows
            .iter()
            .filter(|row| row.status == CellStatus::Infeasible)
            .count();
        assert_eq!(infeasible, 1);
        // nu* = (1/2, sqrt(2) - 1, 3/2 - sqrt(2))
        assert_eq!(
            m.nu[0].as_exact().unwrap(),
            &QuadraticNumber::from_rational(r(1, 2))
        );
        // plan on the support of the winning tree, marginals exact
        assert_eq!(m.plan.len(), 5);
    }

    #[test]
    fn mu_on_the_model_gives_zero() {
        let d = GroundMetric::discrete(3);
        let mu = Distribution::new(vec![r(1, 4), r(1, 2), r(1, 4)]).unwrap();
        let model = ParametricModel::hardy_weinberg();
        let (opt, _) =
            model_distance(&d, &mu, &model, &ModelDistanceConfig::default()).unwrap();
        assert!(opt.value.as_exact().unwrap().is_zero());
        assert!(opt
            .minimizers
            .iter()
            .any(|m| m.theta[0].as_exact().map(|q| q.as_rational() == Some(&r(1, 2)))
                == Some(true)));
    }

    #[test]
    fn numeric_engine_agrees_on_the_headline() {
        let d = GroundMetric::discrete(3);
        let mu = Distribution::new(vec![r(1, 2), r(1, 7), r(5, 14)]).unwrap();
        let model = ParametricModel::hardy_weinberg();
        let config = ModelDistanceConfig {
            engine: Engine::Numeric,
            ..Default::default()
        };
        let (opt, report) = model_distance(&d, &mu, &model, &config).unwrap();
        let expected = 2f64.sqrt() - 8.0 / 7.0;
        assert!((opt.value.to_f64() - expected).abs() < 1e-9);
        assert!(report
            .rows
            .iter()
            .all(|row| row.engine == RowEngine::Numeric || row.candidates.is_empty()));
    }
}
