//! Heuristic fallback minimizer: dense grid scan over the feasible region
//! followed by local window refinement. No global-optimality guarantee.

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};

#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Grid points per axis for the initial scan.
    pub grid: usize,
    /// Refinement stops when the search window per axis drops below this.
    pub tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            grid: 512,
            tol: 1e-10,
        }
    }
}

const FEAS_TOL: f64 = 1e-9;

/// Best feasible point found by grid scan plus refinement. Errors with
/// "cell numerically infeasible" when no grid point satisfies the
/// constraints.
pub fn minimize_cell_numeric(
    objective: &Polynomial,
    constraints: &[Polynomial],
    domain: &[(Rational, Rational)],
    config: &NumericConfig,
) -> Result<(Vec<f64>, f64)> {
    let k = objective.arity();
    if domain.len() != k || constraints.iter().any(|c| c.arity() != k) {
        return Err(Error::DimensionMismatch(
            "objective, constraints and domain disagree on the parameter count".into(),
        ));
    }
    // Constant constraints are exact: a negative one is a definite reject.
    let mut live: Vec<&Polynomial> = Vec::new();
    for c in constraints {
        match c.constant_value() {
            Some(v) if v.is_negative() => {
                return Err(Error::NumericInfeasible("cell numerically infeasible".into()))
            }
            Some(_) => {}
            None => live.push(c),
        }
    }
    let lo: Vec<f64> = domain.iter().map(|(l, _)| l.to_f64()).collect();
    let hi: Vec<f64> = domain.iter().map(|(_, h)| h.to_f64()).collect();
    // Keep the full scan size bounded for higher-dimensional parameters.
    let per_axis = match k {
        0 => return Err(Error::DimensionMismatch("empty parameter space".into())),
        1 | 2 => config.grid.max(2),
        _ => ((2_000_000f64).powf(1.0 / k as f64) as usize).clamp(2, config.grid),
    };

    let feasible = |theta: &[f64]| live.iter().all(|g| g.eval_f64(theta) >= -FEAS_TOL);

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut theta = vec![0.0; k];
    let mut index = vec![0usize; k];
    'scan: loop {
        for a in 0..k {
            theta[a] = lo[a] + (hi[a] - lo[a]) * index[a] as f64 / (per_axis - 1) as f64;
        }
        if feasible(&theta) {
            let v = objective.eval_f64(&theta);
            if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                best = Some((theta.clone(), v));
            }
        }
        let mut axis = 0;
        loop {
            index[axis] += 1;
            if index[axis] < per_axis {
                break;
            }
            index[axis] = 0;
            axis += 1;
            if axis == k {
                break 'scan;
            }
        }
    }

    let (mut center, mut best_v) = best.ok_or_else(|| {
        Error::NumericInfeasible("cell numerically infeasible".into())
    })?;

    // Window refinement around the incumbent: rescan a small grid in a
    // shrinking box, clamped to the domain, keeping only feasible points.
    let mut window: Vec<f64> = (0..k)
        .map(|a| (hi[a] - lo[a]) / (per_axis - 1) as f64 * 2.0)
        .collect();
    let refine_pts = 17usize;
    while window.iter().any(|w| *w > config.tol) {
        let mut improved_center = center.clone();
        let mut local = vec![0usize; k];
        'refine: loop {
            for a in 0..k {
                let l = (center[a] - window[a]).max(lo[a]);
                let h = (center[a] + window[a]).min(hi[a]);
                theta[a] = l + (h - l) * local[a] as f64 / (refine_pts - 1) as f64;
            }
            if feasible(&theta) {
                let v = objective.eval_f64(&theta);
                if v < best_v {
                    best_v = v;
                    improved_center = theta.clone();
                }
            }
            let mut axis = 0;
            loop {
                local[axis] += 1;
                if local[axis] < refine_pts {
                    break;
                }
                local[axis] = 0;
                axis += 1;
                if axis == k {
                    break 'refine;
                }
            }
        }
        center = improved_center;
        for w in window.iter_mut() {
            *w /= 4.0;
        }
    }
    Ok((center, best_v))
}
