//! Exact Wasserstein distances from discrete distributions to statistical
//! models on a finite state space.
//!
//! The distance between two points of the probability simplex is the optimal
//! value of a transportation linear program; the distance from a point to a
//! model is the minimum of that value over the model. This crate computes
//! both exactly:
//!
//! * [`transport`] solves the point-to-point problem with a rational
//!   network-simplex solver and returns an optimal vertex plan.
//! * [`triangulation`] builds the regular triangulation of the product of two
//!   simplices induced by the ground metric. Its maximal simplices are the
//!   spanning-tree bases that stay dual-feasible, and each one carries the
//!   linear formula for the distance on its cell.
//! * [`cells`] specializes a simplex to a fixed first marginal, producing a
//!   transport-plan template with affine entries, the nonnegativity
//!   constraints, and the linear objective in the second marginal.
//! * [`models`] minimizes those per-cell objectives over a parametric
//!   polynomial model, either in closed form (quadratic algebraic numbers)
//!   or with a numeric fallback, and assembles the global minimum.
//! * [`exact`] supplies the scalar types everything else is built on.

pub mod cells;
pub mod error;
pub mod exact;
pub mod models;
pub mod transport;
pub mod triangulation;

pub use cells::{cell_problem, plan_template, CellProblem, PlanTemplate};
pub use error::{Error, Result};
pub use exact::{AffineForm, Polynomial, QuadraticNumber, Rational};
pub use models::{
    compose_cell, model_distance, ImplicitCurveModel, Optimum, ParametricModel, PiecewiseReport,
    Value,
};
pub use transport::{enumerate_vertices, wasserstein, Distribution, GroundMetric, TransportPlan};
pub use triangulation::{
    coarsen, enumerate_spanning_trees, reduced_cost, regular_triangulation, value_functional,
    SubdivisionCell, TreeSimplex, Triangulation,
};
