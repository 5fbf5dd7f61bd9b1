//! Algebraic-degree utilities for models given as varieties: the degree of
//! the optimal-value function of a linear program over a hypersurface model,
//! and a residual check against the printed degree-six dual polynomial of
//! the cubic curve `x1^3 + x2^3 + x3^3 = 4 x1 x2 x3`.

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};
use crate::models::ImplicitCurveModel;

/// Algebraic degree of the optimal value of a generic linear functional over
/// a degree-`m` hypersurface model in the `(n-1)`-simplex: `m (m-1)^(n-2)`.
pub fn wasserstein_degree_hypersurface(m: u64, n: u64) -> u128 {
    assert!(m >= 1, "hypersurface degree must be positive");
    assert!(n >= 2, "need at least two states");
    let mut acc: u128 = m as u128;
    for _ in 0..n - 2 {
        acc = acc
            .checked_mul((m - 1) as u128)
            .expect("degree overflows u128");
    }
    acc
}

/// The cubic `x1^3 + x2^3 + x3^3 - 4 x1 x2 x3` as an implicit curve model.
pub fn elliptic_curve_cubic() -> ImplicitCurveModel {
    let x = |i| Polynomial::variable(3, i);
    let f = x(0)
        .pow(3)
        .add(&x(1).pow(3))
        .add(&x(2).pow(3))
        .sub(&x(0).mul(&x(1)).mul(&x(2)).scale(&Rational::of(4, 1)));
    ImplicitCurveModel::new(f).expect("arity 3")
}

/// Terms of the degree-six polynomial whose zero set records the critical
/// values of `c1 x1 + c2 x2 + c3 x3` on the cubic curve above: exponents of
/// `(z, c1, c2, c3)` with integer coefficients.
const DUAL_SEXTIC: &[([u32; 4], i64)] = &[
    ([6, 0, 0, 0], 1),
    ([5, 1, 0, 0], 2),
    ([5, 0, 1, 0], 2),
    ([5, 0, 0, 1], 2),
    ([4, 2, 0, 0], -65),
    ([4, 1, 1, 0], 70),
    ([4, 1, 0, 1], 70),
    ([4, 0, 2, 0], -65),
    ([4, 0, 1, 1], 70),
    ([4, 0, 0, 2], -65),
    ([3, 3, 0, 0], 208),
    ([3, 2, 1, 0], -442),
    ([3, 2, 0, 1], -442),
    ([3, 1, 2, 0], -442),
    ([3, 1, 1, 1], 2048),
    ([3, 1, 0, 2], -442),
    ([3, 0, 3, 0], 208),
    ([3, 0, 2, 1], -442),
    ([3, 0, 1, 2], -442),
    ([3, 0, 0, 3], 208),
    ([2, 4, 0, 0], -117),
    ([2, 3, 1, 0], 546),
    ([2, 3, 0, 1], 546),
    ([2, 2, 2, 0], -1994),
    ([2, 2, 1, 1], 1024),
    ([2, 2, 0, 2], -1994),
    ([2, 1, 3, 0], 546),
    ([2, 1, 2, 1], 1024),
    ([2, 1, 1, 2], 1024),
    ([2, 1, 0, 3], 546),
    ([2, 0, 4, 0], -117),
    ([2, 0, 3, 1], 546),
    ([2, 0, 2, 2], -1994),
    ([2, 0, 1, 3], 546),
    ([2, 0, 0, 4], -117),
    ([1, 5, 0, 0], -162),
    ([1, 4, 1, 0], 288),
    ([1, 4, 0, 1], 288),
    ([1, 3, 2, 0], -606),
    ([1, 3, 1, 1], 1152),
    ([1, 3, 0, 2], -606),
    ([1, 2, 3, 0], -606),
    ([1, 2, 2, 1], -352),
    ([1, 2, 1, 2], -352),
    ([1, 2, 0, 3], -606),
    ([1, 1, 4, 0], 288),
    ([1, 1, 3, 1], 1152),
    ([1, 1, 2, 2], -352),
    ([1, 1, 1, 3], 1152),
    ([1, 1, 0, 4], 288),
    ([1, 0, 5, 0], -162),
    ([1, 0, 4, 1], 288),
    ([1, 0, 3, 2], -606),
    ([1, 0, 2, 3], -606),
    ([1, 0, 1, 4], 288),
    ([1, 0, 0, 5], -162),
    ([0, 6, 0, 0], -27),
    ([0, 4, 1, 1], 288),
    ([0, 3, 3, 0], -202),
    ([0, 3, 0, 3], -202),
    ([0, 2, 2, 2], -176),
    ([0, 1, 4, 1], 288),
    ([0, 1, 1, 4], 288),
    ([0, 0, 6, 0], -27),
    ([0, 0, 3, 3], -202),
    ([0, 0, 0, 6], -27),
];

/// Evaluates the dual sextic at `(-c0, c1, c2, c3)`.
///
/// A zero (up to rounding) certifies that `c0` is a critical value of the
/// functional `c . x` on the cubic curve; in particular the minimum over the
/// curve inside the simplex must produce a residual near zero.
pub fn dual_residual(c0: f64, c: &[f64; 3]) -> f64 {
    let z = -c0;
    let mut acc = 0.0;
    for &(exps, coeff) in DUAL_SEXTIC {
        let mut term = coeff as f64;
        term *= z.powi(exps[0] as i32);
        for (i, &e) in exps[1..].iter().enumerate() {
            term *= c[i].powi(e as i32);
        }
        acc += term;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct CurveMinConfig {
    /// Slices of the simplex along the third coordinate.
    pub slices: usize,
    /// Sample intervals per slice for root bracketing.
    pub samples: usize,
    /// Refinement stops when the slice window falls below this.
    pub tol: f64,
}

impl Default for CurveMinConfig {
    fn default() -> Self {
        CurveMinConfig {
            slices: 400,
            samples: 200,
            tol: 1e-12,
        }
    }
}

/// Numeric minimum of `c . x` over the curve `{f = 0}` intersected with the
/// two-dimensional simplex.
///
/// Slices the simplex by the third coordinate, finds the curve points of
/// each slice by sign-change bisection on the resulting univariate section,
/// and refines the slice grid around the best point. Heuristic: no global
/// guarantee.
pub fn implicit_curve_min(
    model: &ImplicitCurveModel,
    c: &[Rational; 3],
    config: &CurveMinConfig,
) -> Result<([f64; 3], f64)> {
    let cf = [c[0].to_f64(), c[1].to_f64(), c[2].to_f64()];
    let f = model.f();
    let objective = |x: &[f64; 3]| cf[0] * x[0] + cf[1] * x[1] + cf[2] * x[2];

    let scan = |t_lo: f64, t_hi: f64, slices: usize| -> Option<([f64; 3], f64)> {
        let mut best: Option<([f64; 3], f64)> = None;
        for s in 0..=slices {
            let t = t_lo + (t_hi - t_lo) * s as f64 / slices as f64;
            if !(0.0..=1.0).contains(&t) {
                continue;
            }
            for x1 in slice_roots(f, t, config.samples) {
                let x = [x1, 1.0 - t - x1, t];
                let v = objective(&x);
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((x, v));
                }
            }
        }
        best
    };

    let (mut x_best, mut v_best) = scan(0.0, 1.0, config.slices).ok_or_else(|| {
        Error::NumericInfeasible("curve misses the simplex (numerically)".into())
    })?;

    let mut window = 1.0 / config.slices as f64;
    while window > config.tol {
        let t = x_best[2];
        if let Some((x, v)) = scan(t - window, t + window, 40) {
            if v < v_best {
                x_best = x;
                v_best = v;
            }
        }
        window /= 8.0;
    }
    Ok((x_best, v_best))
}

/// Roots in `x1` of `f(x1, 1 - t - x1, t)` for `x1` in `[0, 1 - t]`.
fn slice_roots(f: &Polynomial, t: f64, samples: usize) -> Vec<f64> {
    let width = 1.0 - t;
    if width < 0.0 {
        return Vec::new();
    }
    let g = |x1: f64| f.eval_f64(&[x1, width - x1, t]);
    let mut out = Vec::new();
    let mut prev_x = 0.0;
    let mut prev_g = g(0.0);
    for s in 1..=samples {
        let x = width * s as f64 / samples as f64;
        let gx = g(x);
        if prev_g == 0.0 {
            out.push(prev_x);
        } else if prev_g * gx < 0.0 {
            let (mut a, mut b, mut ga) = (prev_x, x, prev_g);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                if ga * gm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    ga = gm;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_g = gx;
    }
    if prev_g == 0.0 {
        out.push(prev_x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_formula() {
        assert_eq!(wasserstein_degree_hypersurface(2, 2), 2);
        assert_eq!(wasserstein_degree_hypersurface(3, 3), 6);
        assert_eq!(wasserstein_degree_hypersurface(3, 4), 12);
    }

    #[test]
    fn sextic_collapses_at_all_ones() {
        // The coefficients sum to (z + 1)^6 at c = (1,1,1); the constant
        // functional has value 1 on the simplex, so the residual vanishes
        // exactly.
        assert_eq!(dual_residual(1.0, &[1.0, 1.0, 1.0]), 0.0);
        // and the full binomial collapse away from the root
        let z: f64 = 0.3;
        let expected = (z + 1.0).powi(6);
        assert!((dual_residual(-z, &[1.0, 1.0, 1.0]) - expected).abs() < 1e-12);
    }

    #[test]
    fn sextic_is_homogeneous_of_degree_six() {
        let z = 0.7;
        let c = [1.3, -0.4, 2.1];
        let lambda: f64 = 1.9;
        let lhs = dual_residual(lambda * z, &[lambda * c[0], lambda * c[1], lambda * c[2]]);
        let rhs = lambda.powi(6) * dual_residual(z, &c);
        assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
    }

    #[test]
    fn regression_point_value() {
        // Direct evaluation of the printed coefficients at (0, (1, -1, 0)):
        // -27 + 202 - 27 = 148.
        assert_eq!(dual_residual(0.0, &[1.0, -1.0, 0.0]), 148.0);
    }

    #[test]
    fn constant_functional_on_the_curve() {
        let model = elliptic_curve_cubic();
        let one = Rational::one();
        let (x, v) = implicit_curve_min(
            &model,
            &[one.clone(), one.clone(), one],
            &CurveMinConfig::default(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        // the point is on the curve and in the simplex
        assert!(model.f().eval_f64(&[x[0], x[1], x[2]]).abs() < 1e-9);
        assert!(x.iter().all(|&xi| (-1e-9..=1.0 + 1e-9).contains(&xi)));
    }

    #[test]
    fn generic_functional_residual_is_small() {
        let model = elliptic_curve_cubic();
        let c = [
            Rational::of(11, 10),
            Rational::of(9, 10),
            Rational::of(1, 1),
        ];
        let (_, v) = implicit_curve_min(&model, &c, &CurveMinConfig::default()).unwrap();
        let cf = [1.1, 0.9, 1.0];
        let norm: f64 = 1.0 + (cf.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let res = dual_residual(v, &cf).abs();
        assert!(
            res <= 1e-5 * norm.powi(6),
            "residual {res} too large for value {v}"
        );
    }
}
