use otv_core::models::{
    model_distance_with, BuiltModel, Engine, ModelDistanceConfig, NumericConfig, Optimum,
    PiecewiseReport,
};
use otv_core::{
    regular_triangulation, wasserstein, Distribution, GroundMetric, ParametricModel, Rational,
    Triangulation, Value,
};

use crate::docs::{
    CandidateRow, CellRow, PlanEntry, ProblemDocument, ResultDocument, TriangulationMeta,
};
use crate::CliError;

pub fn distance(d: &GroundMetric, mu: &Distribution, nu: &Distribution) -> Result<ResultDocument, CliError> {
    let (value, plan) = wasserstein(d, mu, nu)?;
    let plan_entries = plan
        .support()
        .iter()
        .map(|&(i, j)| PlanEntry {
            i: i + 1,
            j: j + 1,
            value: Value::rational(plan.entry(i, j).clone()),
        })
        .collect();
    Ok(ResultDocument {
        distance: Value::rational(value),
        theta_star: Vec::new(),
        nu_star: vec![nu.masses().iter().cloned().map(Value::rational).collect()],
        cells: Vec::new(),
        plan: plan_entries,
        triangulation_meta: None,
    })
}

pub enum TriangulateOutput {
    Trees,
    Ideal,
    Cells,
    Cone,
}

pub fn triangulate(d: &GroundMetric, format: &TriangulateOutput) -> Result<String, CliError> {
    let t = regular_triangulation(d)?;
    let text = match format {
        TriangulateOutput::Trees => {
            let mut out = String::new();
            for sigma in t.simplices() {
                let edges: Vec<String> = sigma
                    .edges()
                    .iter()
                    .map(|&(i, j)| format!("({},{})", i + 1, j + 1))
                    .collect();
                out.push_str(&format!("{{{}}}\n", edges.join(",")));
            }
            out
        }
        TriangulateOutput::Ideal => format!("{}\n", t.to_monomial_ideal()),
        TriangulateOutput::Cells => {
            let mut out = String::new();
            for (idx, cell) in t.coarsen().iter().enumerate() {
                let value = cell
                    .value_functional
                    .display_with(|v| variable_name(t.n(), v));
                out.push_str(&format!(
                    "cell {}: {} simplices, value = {}\n",
                    idx + 1,
                    cell.member_simplices.len(),
                    value
                ));
            }
            out
        }
        TriangulateOutput::Cone => {
            let mut out = String::new();
            for ineq in t.secondary_cone().inequalities() {
                out.push_str(&format!("{ineq}\n"));
            }
            out
        }
    };
    Ok(text)
}

fn variable_name(n: usize, v: usize) -> String {
    if v < n {
        format!("mu{}", v + 1)
    } else {
        format!("nu{}", v - n + 1)
    }
}

pub struct ModelRun {
    pub triangulation: Triangulation,
    pub model: ParametricModel,
    pub optimum: Optimum,
    pub report: PiecewiseReport,
}

pub fn run_model_distance(
    doc: &ProblemDocument,
    engine_override: Option<Engine>,
    tol: Option<f64>,
    grid: Option<usize>,
) -> Result<ModelRun, CliError> {
    let d = doc.metric()?;
    let mu = doc.mu()?;
    let model = match doc.model.build()? {
        BuiltModel::Parametric(m) => m,
        BuiltModel::ImplicitCurve(_) => {
            return Err(CliError::from(otv_core::Error::Capability(
                "model-distance requires a parametric model; implicit curves support only \
                 linear-functional minimization"
                    .into(),
            )))
        }
    };
    let engine = match engine_override {
        Some(e) => e,
        None => match doc.engine.as_deref() {
            None | Some("exact") => Engine::Exact,
            Some("numeric") => Engine::Numeric,
            Some(other) => {
                return Err(CliError::validation(format!(
                    "unknown engine {other:?}; expected \"exact\" or \"numeric\""
                )))
            }
        },
    };
    let mut numeric = NumericConfig::default();
    if let Some(options) = &doc.options {
        if let Some(t) = options.tol {
            numeric.tol = t;
        }
        if let Some(g) = options.grid {
            numeric.grid = g;
        }
    }
    if let Some(t) = tol {
        numeric.tol = t;
    }
    if let Some(g) = grid {
        numeric.grid = g;
    }
    let config = ModelDistanceConfig {
        engine,
        numeric,
        ..Default::default()
    };
    let triangulation = regular_triangulation(&d)?;
    let (optimum, report) = model_distance_with(&triangulation, &mu, &model, &config)?;
    Ok(ModelRun {
        triangulation,
        model,
        optimum,
        report,
    })
}

pub fn model_result_document(run: &ModelRun) -> ResultDocument {
    let k = run.model.k();
    let cells = run
        .report
        .rows
        .iter()
        .map(|row| CellRow {
            cell_id: row.cell_id,
            objective: row.objective.display_with(|v| param_name(k, v)),
            status: row.status,
            engine: row.engine,
            candidates: row
                .candidates
                .iter()
                .map(|c| CandidateRow {
                    theta: c.theta.clone(),
                    value: c.value.clone(),
                    provenance: c.provenance,
                    feasible: c.feasible,
                })
                .collect(),
            minimum: row.minimum.clone(),
        })
        .collect();
    let first_plan = run
        .optimum
        .minimizers
        .first()
        .map(|m| {
            m.plan
                .iter()
                .map(|(i, j, v)| PlanEntry {
                    i: i + 1,
                    j: j + 1,
                    value: v.clone(),
                })
                .collect()
        })
        .unwrap_or_default();
    ResultDocument {
        distance: run.optimum.value.clone(),
        theta_star: run
            .optimum
            .minimizers
            .iter()
            .map(|m| m.theta.clone())
            .collect(),
        nu_star: run
            .optimum
            .minimizers
            .iter()
            .map(|m| m.nu.clone())
            .collect(),
        cells,
        plan: first_plan,
        triangulation_meta: Some(TriangulationMeta {
            n: run.triangulation.n(),
            simplices: run.triangulation.simplices().len(),
            cells: run.triangulation.coarsen().len(),
            perturbed: run.triangulation.perturbed(),
        }),
    }
}

/// Human-readable per-cell table: objective, feasibility, best point, value.
pub fn model_result_table(run: &ModelRun) -> String {
    let k = run.model.k();
    let mut rows: Vec<[String; 5]> = vec![[
        "cell".into(),
        "objective".into(),
        "feasible".into(),
        "solution".into(),
        "minimum value".into(),
    ]];
    for row in &run.report.rows {
        let best = row.minimum.as_ref().and_then(|min| {
            row.candidates
                .iter()
                .find(|c| c.feasible && c.value.ties_with(min, 1e-12))
        });
        rows.push([
            format!("{}", row.cell_id + 1),
            row.objective.display_with(|v| param_name(k, v)),
            match row.status {
                otv_core::models::CellStatus::Feasible => "yes".into(),
                otv_core::models::CellStatus::Infeasible => "no".into(),
            },
            best.map(|c| theta_text(&c.theta)).unwrap_or_else(|| "-".into()),
            row.minimum
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (idx, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
        if idx == 0 {
            out.push_str(&format!(
                "{}\n",
                widths
                    .iter()
                    .map(|w| "-".repeat(*w))
                    .collect::<Vec<_>>()
                    .join("-+-")
            ));
        }
    }
    out.push('\n');
    out.push_str(&format!("distance: {}\n", run.optimum.value));
    for m in &run.optimum.minimizers {
        out.push_str(&format!(
            "theta* = {} on cells {:?}\n",
            theta_text(&m.theta),
            m.cell_ids.iter().map(|c| c + 1).collect::<Vec<_>>()
        ));
    }
    out
}

fn theta_text(theta: &[Value]) -> String {
    let coords: Vec<String> = theta.iter().map(|v| v.to_string()).collect();
    format!("({})", coords.join(", "))
}

fn param_name(k: usize, v: usize) -> String {
    match (k, v) {
        (1, 0) => "p".into(),
        (2, 0) => "p".into(),
        (2, 1) => "q".into(),
        _ => format!("t{}", v + 1),
    }
}

/// Distance landscape on a parameter grid, one exact transport solve per
/// point, as CSV with 15 significant digits.
pub fn heatmap(doc: &ProblemDocument, grid: usize) -> Result<String, CliError> {
    let d = doc.metric()?;
    let mu = doc.mu()?;
    let model = match doc.model.build()? {
        BuiltModel::Parametric(m) => m,
        BuiltModel::ImplicitCurve(_) => {
            return Err(CliError::from(otv_core::Error::Capability(
                "heatmap requires a parametric model".into(),
            )))
        }
    };
    let k = model.k();
    if k > 2 {
        return Err(CliError::from(otv_core::Error::Capability(format!(
            "heatmap supports 1 or 2 parameters, got {k}"
        ))));
    }
    let axes: Vec<Vec<Rational>> = model
        .domain()
        .iter()
        .map(|(lo, hi)| grid_points(lo, hi, grid))
        .collect();
    let mut out = String::new();
    let value_at = |theta: &[Rational]| -> Result<f64, CliError> {
        let nu = Distribution::new(model.evaluate(theta)?)?;
        let (value, _) = wasserstein(&d, &mu, &nu)?;
        Ok(value.to_f64())
    };
    if k == 1 {
        out.push_str("theta,w\n");
        for t in &axes[0] {
            let w = value_at(std::slice::from_ref(t))?;
            out.push_str(&format!("{},{}\n", fmt15(t.to_f64()), fmt15(w)));
        }
    } else {
        out.push_str("p,q,w\n");
        for p in &axes[0] {
            for q in &axes[1] {
                let w = value_at(&[p.clone(), q.clone()])?;
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt15(p.to_f64()),
                    fmt15(q.to_f64()),
                    fmt15(w)
                ));
            }
        }
    }
    Ok(out)
}

fn grid_points(lo: &Rational, hi: &Rational, grid: usize) -> Vec<Rational> {
    if grid <= 1 {
        return vec![(lo + hi) * Rational::of(1, 2)];
    }
    (0..grid)
        .map(|s| {
            let t = Rational::of(s as i64, (grid - 1) as i64);
            lo + &(&(hi - lo) * &t)
        })
        .collect()
}

fn fmt15(x: f64) -> String {
    let s = format!("{x:.14e}");
    // trim a zero exponent for readability: 5.0e-1 style stays
    s
}
