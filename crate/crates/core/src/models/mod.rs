//! Statistical models inside the probability simplex, per-cell polynomial
//! minimization engines, and the driver that assembles the distance from a
//! distribution to a model.

mod driver;
mod dual;
mod exact_engine;
mod format;
mod numeric_engine;

use std::cmp::Ordering;

use crate::cells::CellProblem;
use crate::error::{Error, Result};
use crate::exact::{Polynomial, QuadraticNumber, Rational};

pub use driver::{
    model_distance, model_distance_with, CellReport, CellStatus, Engine, Minimizer,
    ModelDistanceConfig, Optimum, PiecewiseReport, RowEngine,
};
pub use dual::{
    dual_residual, elliptic_curve_cubic, implicit_curve_min, wasserstein_degree_hypersurface,
    CurveMinConfig,
};
pub use exact_engine::{minimize_cell_exact, Candidate, Provenance};
pub use format::{BuiltModel, ModelSpec, PolynomialSpec, TermSpec};
pub use numeric_engine::{minimize_cell_numeric, NumericConfig};

/// Polynomial map from a parameter box into the probability simplex: the
/// coordinates sum to one identically and are nonnegative on the box
/// (verified by sampling at construction).
#[derive(Clone, Debug)]
pub struct ParametricModel {
    k: usize,
    coordinates: Vec<Polynomial>,
    domain: Vec<(Rational, Rational)>,
}

impl ParametricModel {
    pub fn new(
        coordinates: Vec<Polynomial>,
        domain: Vec<(Rational, Rational)>,
    ) -> Result<Self> {
        if coordinates.len() < 2 {
            return Err(Error::InvalidModel(
                "need at least two coordinate polynomials".into(),
            ));
        }
        let k = coordinates[0].arity();
        if coordinates.iter().any(|c| c.arity() != k) {
            return Err(Error::InvalidModel(
                "coordinate polynomials disagree on the parameter count".into(),
            ));
        }
        if domain.len() != k {
            return Err(Error::InvalidModel(format!(
                "domain box has {} axes for {} parameters",
                domain.len(),
                k
            )));
        }
        if domain.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidModel("empty domain axis".into()));
        }
        let sum = coordinates
            .iter()
            .fold(Polynomial::zero(k), |acc, c| acc.add(c));
        if sum != Polynomial::constant(k, Rational::one()) {
            return Err(Error::InvalidModel(
                "coordinates do not sum to 1 identically".into(),
            ));
        }
        let model = ParametricModel {
            k,
            coordinates,
            domain,
        };
        // Nonnegativity on the box, checked on a coarse sample grid.
        for theta in model.sample_grid(9) {
            for c in &model.coordinates {
                if c.eval(&theta)?.is_negative() {
                    return Err(Error::InvalidModel(format!(
                        "coordinate {} is negative inside the domain",
                        c
                    )));
                }
            }
        }
        Ok(model)
    }

    /// The one-parameter curve `p -> (p^2, 2p(1-p), (1-p)^2)` on `[0, 1]`.
    pub fn hardy_weinberg() -> Self {
        let p = Polynomial::variable(1, 0);
        let one_minus = Polynomial::constant(1, Rational::one()).sub(&p);
        let coords = vec![
            p.pow(2),
            p.mul(&one_minus).scale(&Rational::of(2, 1)),
            one_minus.pow(2),
        ];
        ParametricModel::new(coords, vec![(Rational::zero(), Rational::one())])
            .expect("built-in model is valid")
    }

    /// The two-parameter surface `(p, q) -> (pq, p(1-q), (1-p)q, (1-p)(1-q))`
    /// on the unit square: distributions of two independent bits, i.e. the
    /// rank-one quadric `x1 x4 = x2 x3` inside the simplex.
    pub fn independence_2x2() -> Self {
        let p = Polynomial::variable(2, 0);
        let q = Polynomial::variable(2, 1);
        let one = Polynomial::constant(2, Rational::one());
        let np = one.sub(&p);
        let nq = one.sub(&q);
        let coords = vec![p.mul(&q), p.mul(&nq), np.mul(&q), np.mul(&nq)];
        let unit = (Rational::zero(), Rational::one());
        ParametricModel::new(coords, vec![unit.clone(), unit]).expect("built-in model is valid")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[Polynomial] {
        &self.coordinates
    }

    pub fn domain(&self) -> &[(Rational, Rational)] {
        &self.domain
    }

    pub fn max_degree(&self) -> u32 {
        self.coordinates
            .iter()
            .map(|c| c.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, theta: &[Rational]) -> Result<Vec<Rational>> {
        self.coordinates.iter().map(|c| c.eval(theta)).collect()
    }

    pub fn evaluate_quadratic(&self, theta: &[QuadraticNumber]) -> Result<Vec<QuadraticNumber>> {
        self.coordinates
            .iter()
            .map(|c| c.eval_quadratic(theta))
            .collect()
    }

    pub fn evaluate_f64(&self, theta: &[f64]) -> Vec<f64> {
        self.coordinates.iter().map(|c| c.eval_f64(theta)).collect()
    }

    pub fn domain_midpoint(&self) -> Vec<Rational> {
        self.domain
            .iter()
            .map(|(lo, hi)| (lo + hi) * Rational::of(1, 2))
            .collect()
    }

    fn sample_grid(&self, per_axis: usize) -> Vec<Vec<Rational>> {
        let mut points = vec![Vec::new()];
        for (lo, hi) in &self.domain {
            let mut next = Vec::new();
            for point in &points {
                for s in 0..per_axis {
                    let t = Rational::of(s as i64, (per_axis - 1) as i64);
                    let coord = lo + &(&(hi - lo) * &t);
                    let mut p = point.clone();
                    p.push(coord);
                    next.push(p);
                }
            }
            points = next;
        }
        points
    }
}

/// A curve `{f = 0}` in the two-dimensional simplex, used with the numeric
/// linear-functional minimizer.
#[derive(Clone, Debug)]
pub struct ImplicitCurveModel {
    f: Polynomial,
}

impl ImplicitCurveModel {
    pub fn new(f: Polynomial) -> Result<Self> {
        if f.arity() != 3 {
            return Err(Error::InvalidModel(format!(
                "implicit curve needs 3 coordinates, got {}",
                f.arity()
            )));
        }
        Ok(ImplicitCurveModel { f })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }
}

/// Scalar that is either a closed-form quadratic algebraic number or a
/// floating approximation from a heuristic engine.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(QuadraticNumber),
    Float(f64),
}

impl Value {
    pub fn exact(q: QuadraticNumber) -> Self {
        Value::Exact(q)
    }

    pub fn rational(r: Rational) -> Self {
        Value::Exact(QuadraticNumber::from_rational(r))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => q.to_f64(),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&QuadraticNumber> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    /// Certified for two exact values, floating otherwise.
    pub fn compare(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.compare(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    /// Tie test: exact equality between exact values, absolute tolerance
    /// otherwise.
    pub fn ties_with(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{x:.15e}"),
        }
    }
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Value", 2)?;
        match self {
            Value::Exact(q) => s.serialize_field("exact", q)?,
            Value::Float(_) => s.serialize_field("exact", &Option::<QuadraticNumber>::None)?,
        }
        s.serialize_field("float", &self.to_f64())?;
        s.end()
    }
}

impl<'de> serde::Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            exact: Option<QuadraticNumber>,
            float: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(match raw.exact {
            Some(q) => Value::Exact(q),
            None => Value::Float(raw.float),
        })
    }
}

/// Substitutes the model coordinates into a cell's objective and constraints,
/// giving polynomials in the model parameters (expanded).
pub fn compose_cell(
    model: &ParametricModel,
    cell: &CellProblem,
) -> Result<(Polynomial, Vec<Polynomial>)> {
    if model.n() != cell.template().n() {
        return Err(Error::DimensionMismatch(format!(
            "model into simplex of dimension {} composed with a cell on {} states",
            model.n(),
            cell.template().n()
        )));
    }
    let objective = compose_affine(model, cell.objective());
    let constraints = cell
        .constraints()
        .iter()
        .map(|c| compose_affine(model, c))
        .collect();
    Ok((objective, constraints))
}

fn compose_affine(model: &ParametricModel, form: &crate::exact::AffineForm) -> Polynomial {
    let mut p = Polynomial::constant(model.k(), form.constant_term().clone());
    for (i, coeff) in form.coefficients() {
        p = p.add(&model.coordinates()[i].scale(coeff));
    }
    p
}
