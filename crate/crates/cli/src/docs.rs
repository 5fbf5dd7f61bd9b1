//! Input and output document formats.
//!
//! All rationals travel as `"p/q"` strings; JSON integers are taken exactly
//! and JSON floats are converted to their exact binary value. Scalar results
//! carry both an exact part (when the exact engine produced one) and a
//! float, serialized as `{"exact": {"a","b","c","float"} | null, "float"}`.

use serde::{Deserialize, Serialize};

use otv_core::models::{CellStatus, ModelSpec, Provenance, RowEngine};
use otv_core::{Distribution, GroundMetric, Rational, Value};

use crate::CliError;

/// Rational input: `"p/q"` string, integer, or float (exact binary value).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RationalInput {
    pub fn to_rational(&self, what: &str) -> Result<Rational, CliError> {
        let conv = |r: otv_core::Result<Rational>| {
            r.map_err(|e| CliError::validation(format!("{what}: {e}")))
        };
        match self {
            RationalInput::Int(i) => Ok(Rational::from_int(*i)),
            RationalInput::Float(x) => conv(Rational::from_f64_exact(*x)),
            RationalInput::Text(s) => conv(s.parse()),
        }
    }
}

/// Problem document for `model-distance` and `heatmap`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub n: usize,
    pub d: Vec<Vec<RationalInput>>,
    pub mu: Vec<RationalInput>,
    pub model: ModelSpec,
    #[serde(default)]
    pub engine: Option<String>,
    #[serde(default)]
    pub options: Option<OptionsDocument>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDocument {
    pub tol: Option<f64>,
    pub grid: Option<usize>,
}

impl ProblemDocument {
    pub fn metric(&self) -> Result<GroundMetric, CliError> {
        build_metric(Some(self.n), &self.d)
    }

    pub fn mu(&self) -> Result<Distribution, CliError> {
        let mass = self
            .mu
            .iter()
            .enumerate()
            .map(|(i, v)| v.to_rational(&format!("mu[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Distribution::new(mass).map_err(CliError::from)
    }
}

/// Metric file: either `{"n": .., "d": [[..]]}` or a bare matrix `[[..]]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum MetricFile {
    Doc {
        n: Option<usize>,
        d: Vec<Vec<RationalInput>>,
    },
    Bare(Vec<Vec<RationalInput>>),
}

impl MetricFile {
    pub fn metric(&self) -> Result<GroundMetric, CliError> {
        match self {
            MetricFile::Doc { n, d } => build_metric(*n, d),
            MetricFile::Bare(d) => build_metric(None, d),
        }
    }
}

fn build_metric(
    n: Option<usize>,
    d: &[Vec<RationalInput>],
) -> Result<GroundMetric, CliError> {
    if let Some(n) = n {
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(CliError::validation(format!(
                "field d is not an {n}x{n} matrix"
            )));
        }
    }
    let cost = d
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| v.to_rational(&format!("d[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroundMetric::new(cost).map_err(CliError::from)
}

/// Result document shared by `distance` and `model-distance`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResultDocument {
    pub distance: Value,
    pub theta_star: Vec<Vec<Value>>,
    pub nu_star: Vec<Vec<Value>>,
    pub cells: Vec<CellRow>,
    /// Sparse plan triples with one-based indices.
    pub plan: Vec<PlanEntry>,
    pub triangulation_meta: Option<TriangulationMeta>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CellRow {
    pub cell_id: usize,
    pub objective: String,
    pub status: CellStatus,
    pub engine: RowEngine,
    pub candidates: Vec<CandidateRow>,
    pub minimum: Option<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CandidateRow {
    pub theta: Vec<Value>,
    pub value: Value,
    pub provenance: Provenance,
    pub feasible: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlanEntry {
    pub i: usize,
    pub j: usize,
    pub value: Value,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TriangulationMeta {
    pub n: usize,
    pub simplices: usize,
    pub cells: usize,
    pub perturbed: bool,
}
