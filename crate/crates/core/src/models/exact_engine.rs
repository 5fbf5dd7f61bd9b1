//! Closed-form minimization of a low-degree polynomial objective over a
//! region cut out by polynomial inequalities inside a box.
//!
//! Supported inputs: one or two parameters, total degree at most two for the
//! objective and every constraint. The engine enumerates a candidate set
//! that provably contains the constrained minimum:
//!
//! * stationary points of the objective (linear system),
//! * stationary points of the objective restricted to every constraint
//!   curve and box edge (reduced to a univariate problem by substitution,
//!   or through the Lagrange condition when no variable appears linearly),
//! * pairwise intersections of the curves and edges, including box corners.
//!
//! Candidates are kept with a feasibility flag from exact sign checks; the
//! minimum over the feasible ones is the cell minimum. Values stay in one
//! quadratic extension per candidate and are reported as
//! [`QuadraticNumber`]s; the rare root that has no closed form at degree two
//! (nested radicals from curve pairs, residual factors of the reduced
//! univariate) is carried as a flagged float.

use crate::error::{Error, Result};
use crate::exact::{Polynomial, QuadraticNumber, Rational};
use crate::models::Value;

/// How a candidate was generated.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Unconstrained stationary point of the objective.
    InteriorCritical,
    /// Stationary point of the objective restricted to one curve.
    Boundary,
    /// Intersection of two curves (constraint curves and box edges).
    Corner,
    /// Best point of a numeric scan (numeric engine only).
    NumericScan,
}

/// One enumerated candidate optimizer.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub theta: Vec<Value>,
    pub value: Value,
    pub provenance: Provenance,
    pub feasible: bool,
}

/// Enumerates the candidate set for the constrained minimum. See the module
/// docs for the classes; unsupported arity or degree is a capability error
/// (`use numeric engine`).
pub fn minimize_cell_exact(
    objective: &Polynomial,
    constraints: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> Result<Vec<Candidate>> {
    let k = objective.arity();
    if domain.len() != k || constraints.iter().any(|c| c.arity() != k) {
        return Err(Error::DimensionMismatch(
            "objective, constraints and domain disagree on the parameter count".into(),
        ));
    }
    if k == 0 || k > 2 {
        return Err(Error::Capability(format!(
            "use numeric engine: exact engine supports 1 or 2 parameters, got {k}"
        )));
    }
    if objective.total_degree() > 2 {
        return Err(Error::Capability(format!(
            "use numeric engine: objective has degree {}",
            objective.total_degree()
        )));
    }
    if let Some(c) = constraints.iter().find(|c| c.total_degree() > 2) {
        return Err(Error::Capability(format!(
            "use numeric engine: constraint has degree {}",
            c.total_degree()
        )));
    }

    // Constant constraints decide feasibility outright.
    let mut curves: Vec<Polynomial> = Vec::new();
    for c in constraints {
        match c.constant_value() {
            Some(v) if v.is_negative() => return Ok(Vec::new()),
            Some(_) => {}
            None => curves.extend(split_components(c)),
        }
    }

    let candidates = match k {
        1 => univariate_candidates(objective, &curves, domain),
        _ => bivariate_candidates(objective, &curves, domain),
    };
    Ok(assess(candidates, objective, constraints, domain))
}

/// Raw candidate point before evaluation and the feasibility check.
struct RawCandidate {
    theta: Vec<Root>,
    provenance: Provenance,
}

#[derive(Clone, Debug)]
enum Root {
    Exact(QuadraticNumber),
    Approx(f64),
}

impl Root {
    fn rational(r: Rational) -> Root {
        Root::Exact(QuadraticNumber::from_rational(r))
    }
}

fn univariate_candidates(
    objective: &Polynomial,
    curves: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> Vec<RawCandidate> {
    let (lo, hi) = domain[0].clone();
    let mut out = vec![
        RawCandidate {
            theta: vec![Root::rational(lo)],
            provenance: Provenance::Corner,
        },
        RawCandidate {
            theta: vec![Root::rational(hi)],
            provenance: Provenance::Corner,
        },
    ];
    let derivative = objective.partial_derivative(0);
    for root in poly_roots(&derivative, domain) {
        out.push(RawCandidate {
            theta: vec![root],
            provenance: Provenance::InteriorCritical,
        });
    }
    for g in curves {
        for root in poly_roots(g, domain) {
            out.push(RawCandidate {
                theta: vec![root],
                provenance: Provenance::Boundary,
            });
        }
    }
    out
}

fn bivariate_candidates(
    objective: &Polynomial,
    curves: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> Vec<RawCandidate> {
    let mut all_curves: Vec<Polynomial> = curves.to_vec();
    for (var, (lo, hi)) in domain.iter().enumerate() {
        let v = Polynomial::variable(2, var);
        all_curves.push(v.sub(&Polynomial::constant(2, lo.clone())));
        all_curves.push(Polynomial::constant(2, hi.clone()).sub(&v));
    }

    let mut out = Vec::new();

    // Interior stationary points: the gradient of a quadratic is linear.
    let fp = objective.partial_derivative(0);
    let fq = objective.partial_derivative(1);
    match solve_linear_system(&fp, &fq) {
        LinearSolution::Point(p, q) => out.push(RawCandidate {
            theta: vec![Root::rational(p), Root::rational(q)],
            provenance: Provenance::InteriorCritical,
        }),
        LinearSolution::Line(line) => {
            // A whole line of critical points: the objective is constant on
            // it, so its crossings of the region boundary carry the same
            // value.
            all_curves.push(line);
        }
        LinearSolution::None => {}
    }

    // Stationary points of the restriction to each curve.
    for g in &all_curves {
        for theta in restricted_stationary_points(objective, g, domain) {
            out.push(RawCandidate {
                theta,
                provenance: Provenance::Boundary,
            });
        }
    }

    // Pairwise curve intersections.
    for (idx, g1) in all_curves.iter().enumerate() {
        for g2 in &all_curves[idx + 1..] {
            for theta in intersect_curves(g1, g2, domain) {
                out.push(RawCandidate {
                    theta,
                    provenance: Provenance::Corner,
                });
            }
        }
    }
    out
}

enum LinearSolution {
    Point(Rational, Rational),
    /// Solution set is the zero line of this polynomial.
    Line(Polynomial),
    None,
}

/// Solves two affine equations in two unknowns.
fn solve_linear_system(f: &Polynomial, g: &Polynomial) -> LinearSolution {
    let coef = |p: &Polynomial, e0: u32, e1: u32| -> Rational {
        p.terms()
            .find(|(exps, _)| exps[0] == e0 && exps[1] == e1)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    };
    let (a11, a12, b1) = (coef(f, 1, 0), coef(f, 0, 1), coef(f, 0, 0));
    let (a21, a22, b2) = (coef(g, 1, 0), coef(g, 0, 1), coef(g, 0, 0));
    let det = &(&a11 * &a22) - &(&a12 * &a21);
    if !det.is_zero() {
        // Cramer's rule for a11 p + a12 q = -b1, a21 p + a22 q = -b2.
        let p = &(&(-&b1) * &a22) - &(&(-&b2) * &a12);
        let q = &(&a11 * &(-&b2)) - &(&a21 * &(-&b1));
        return LinearSolution::Point(&p / &det, &q / &det);
    }
    // Parallel rows: consistent iff all 2x2 minors with the constant column
    // vanish, in which case the critical set is a whole line.
    let consistent = (&(&a11 * &b2) - &(&a21 * &b1)).is_zero()
        && (&(&a12 * &b2) - &(&a22 * &b1)).is_zero();
    if consistent {
        for cand in [f, g] {
            if !cand.is_constant() {
                return LinearSolution::Line(cand.clone());
            }
        }
    }
    LinearSolution::None
}

/// `g` written as `A(u) * x_v + B(u)` for the variable it is linear in.
struct SolvedVar {
    var: usize,
    a: Polynomial,
    b: Polynomial,
}

fn solve_for_linear_var(g: &Polynomial) -> Option<SolvedVar> {
    for var in [1usize, 0] {
        if g.degree_in(var) == 1 {
            let coeffs = g.coefficients_in(var);
            return Some(SolvedVar {
                var,
                a: coeffs[1].clone(),
                b: coeffs[0].clone(),
            });
        }
    }
    None
}

/// Splits off a line component when a curve that is linear in one variable
/// degenerates, e.g. `(1-p) q = (p - 1) * (-q)`. Such factors arise from
/// plan templates with zero marginal entries; handling them separately keeps
/// the substitution routes total.
fn split_components(g: &Polynomial) -> Vec<Polynomial> {
    if g.arity() != 2 {
        return vec![g.clone()];
    }
    if let Some(solved) = solve_for_linear_var(g) {
        let u = 1 - solved.var;
        // A common root of A and B makes (u - u0) a factor.
        if solved.a.degree_in(u) == 1 {
            let a_coeffs = solved.a.coefficients_in(u);
            let (a1, a0) = (&a_coeffs[1], &a_coeffs[0]);
            let (a1v, a0v) = (
                a1.constant_value().unwrap(),
                a0.constant_value().unwrap(),
            );
            let u0 = -&a0v / &a1v;
            let b_univ = to_univariate(&solved.b, u);
            let b_at = b_univ.eval(&[u0.clone()]).expect("univariate evaluation");
            if b_at.is_zero() {
                let line =
                    Polynomial::variable(2, u).sub(&Polynomial::constant(2, u0.clone()));
                // g / (u - u0) = a1 * x_v + B / (u - u0)
                let b_quot = deflate_root(&b_univ, &u0);
                let mut rest = Polynomial::variable(2, solved.var).scale(&a1v);
                for (deg, c) in b_quot.iter().enumerate() {
                    let mut exps = vec![0u32; 2];
                    exps[u] = deg as u32;
                    rest.add_term(exps, c.clone());
                }
                return vec![line, rest];
            }
        }
    }
    vec![g.clone()]
}

/// Stationary points of `objective` restricted to the curve `g = 0`.
fn restricted_stationary_points(
    objective: &Polynomial,
    g: &Polynomial,
    domain: &[(Rational, Rational)],
) -> Vec<Vec<Root>> {
    if let Some(solved) = solve_for_linear_var(g) {
        let u = 1 - solved.var;
        // On the curve x_v = -B/A, so the objective becomes N/D with
        // denominator a power of A; stationary points are roots of
        // N' D - N D'.
        let f_coeffs = objective.coefficients_in(solved.var);
        let f2 = f_coeffs.get(2).cloned().unwrap_or_else(|| Polynomial::zero(2));
        let f1 = f_coeffs.get(1).cloned().unwrap_or_else(|| Polynomial::zero(2));
        let f0 = f_coeffs[0].clone();
        let (num, den) = if f2.is_zero() {
            (
                f0.mul(&solved.a).sub(&f1.mul(&solved.b)),
                solved.a.clone(),
            )
        } else {
            (
                f2.mul(&solved.b).mul(&solved.b)
                    .sub(&f1.mul(&solved.b).mul(&solved.a))
                    .add(&f0.mul(&solved.a).mul(&solved.a)),
                solved.a.mul(&solved.a),
            )
        };
        let stationary = num
            .partial_derivative(u)
            .mul(&den)
            .sub(&num.mul(&den.partial_derivative(u)));
        let u_domain = [domain[u].clone()];
        let roots = poly_roots(&to_univariate_padded(&stationary, u), &u_domain);
        roots
            .into_iter()
            .filter_map(|u_root| back_substitute(&solved, u, &u_root))
            .collect()
    } else {
        // No variable appears linearly: use the Lagrange condition
        // fp gq - fq gp = 0 on the curve.
        let h = objective
            .partial_derivative(0)
            .mul(&g.partial_derivative(1))
            .sub(&objective.partial_derivative(1).mul(&g.partial_derivative(0)));
        intersect_curves(g, &h, domain)
    }
}

/// Common zeros of two curves of total degree at most two.
fn intersect_curves(
    g1: &Polynomial,
    g2: &Polynomial,
    domain: &[(Rational, Rational)],
) -> Vec<Vec<Root>> {
    // A curve not involving one variable pins the other outright.
    for (ga, gb) in [(g1, g2), (g2, g1)] {
        for var in [0usize, 1] {
            let u = 1 - var;
            if ga.degree_in(var) == 0 && ga.degree_in(u) >= 1 {
                let u_domain = [domain[u].clone()];
                let mut out = Vec::new();
                for u_root in poly_roots(&to_univariate_padded(ga, u), &u_domain) {
                    for v_root in solve_section(gb, u, &u_root, var) {
                        let mut theta = vec![Root::Approx(0.0), Root::Approx(0.0)];
                        theta[u] = u_root.clone();
                        theta[var] = v_root;
                        out.push(theta);
                    }
                }
                return out;
            }
        }
    }
    // Substitute the linearly-occurring variable of one curve into the other.
    for (ga, gb) in [(g1, g2), (g2, g1)] {
        if let Some(solved) = solve_for_linear_var(ga) {
            let v = solved.var;
            let u = 1 - v;
            let gb_coeffs = gb.coefficients_in(v);
            let c2 = gb_coeffs.get(2).cloned().unwrap_or_else(|| Polynomial::zero(2));
            let c1 = gb_coeffs.get(1).cloned().unwrap_or_else(|| Polynomial::zero(2));
            let c0 = gb_coeffs[0].clone();
            let num = if c2.is_zero() {
                c0.mul(&solved.a).sub(&c1.mul(&solved.b))
            } else {
                c2.mul(&solved.b).mul(&solved.b)
                    .sub(&c1.mul(&solved.b).mul(&solved.a))
                    .add(&c0.mul(&solved.a).mul(&solved.a))
            };
            let u_domain = [domain[u].clone()];
            return poly_roots(&to_univariate_padded(&num, u), &u_domain)
                .into_iter()
                .filter_map(|u_root| back_substitute(&solved, u, &u_root))
                .collect();
        }
    }
    // Both curves are genuinely quadratic in both variables: eliminate with
    // the degree-two resultant and solve the section.
    let res = resultant_quadratics(g1, g2, 1);
    let u_domain = [domain[0].clone()];
    let mut out = Vec::new();
    for u_root in poly_roots(&to_univariate_padded(&res, 0), &u_domain) {
        for v_root in solve_section(g1, 0, &u_root, 1) {
            out.push(vec![u_root.clone(), v_root]);
        }
    }
    out
}

/// Resultant of two polynomials of degree at most two in `var`, as a
/// polynomial in the other variable.
fn resultant_quadratics(g1: &Polynomial, g2: &Polynomial, var: usize) -> Polynomial {
    let a = g1.coefficients_in(var);
    let b = g2.coefficients_in(var);
    let get = |v: &[Polynomial], i: usize| {
        v.get(i).cloned().unwrap_or_else(|| Polynomial::zero(2))
    };
    let (a2, a1, a0) = (get(&a, 2), get(&a, 1), get(&a, 0));
    let (b2, b1, b0) = (get(&b, 2), get(&b, 1), get(&b, 0));
    // Res(a2 x^2 + a1 x + a0, b2 x^2 + b1 x + b0)
    //   = (a2 b0 - a0 b2)^2 - (a2 b1 - a1 b2)(a1 b0 - a0 b1)
    let m = a2.mul(&b0).sub(&a0.mul(&b2));
    let n = a2.mul(&b1).sub(&a1.mul(&b2));
    let p = a1.mul(&b0).sub(&a0.mul(&b1));
    m.mul(&m).sub(&n.mul(&p))
}

/// Solves `g(.., u = u_root, ..)` for the remaining variable.
fn solve_section(g: &Polynomial, u: usize, u_root: &Root, v: usize) -> Vec<Root> {
    let coeffs = g.coefficients_in(v);
    let get = |i: usize| {
        coeffs
            .get(i)
            .map(|p| to_univariate_padded(p, u))
            .unwrap_or_else(|| Polynomial::zero(1))
    };
    let (c2, c1, c0) = (get(2), get(1), get(0));
    match u_root {
        Root::Exact(q) if q.is_rational() => {
            let at = |p: &Polynomial| p.eval(&[q.as_rational().unwrap().clone()]).unwrap();
            quadratic_roots(&at(&c0), &at(&c1), &at(&c2))
                .into_iter()
                .map(Root::Exact)
                .collect()
        }
        Root::Exact(q) => {
            let at = |p: &Polynomial| p.eval_quadratic(std::slice::from_ref(q)).unwrap();
            let (v2, v1, v0) = (at(&c2), at(&c1), at(&c0));
            if v2.is_zero() {
                if v1.is_zero() {
                    return Vec::new();
                }
                // linear over the quadratic extension
                return vec![Root::Exact(
                    &(-&v0) * &v1.recip().expect("nonzero leading coefficient"),
                )];
            }
            // The discriminant lives in the extension; its square root is
            // generally a nested radical, so fall back to floats.
            float_quadratic_roots(v2.to_f64(), v1.to_f64(), v0.to_f64())
                .into_iter()
                .map(Root::Approx)
                .collect()
        }
        Root::Approx(x) => {
            let at = |p: &Polynomial| p.eval_f64(&[*x]);
            float_quadratic_roots(at(&c2), at(&c1), at(&c0))
                .into_iter()
                .map(Root::Approx)
                .collect()
        }
    }
}

/// `x_v` from the solved representation at a root of the reduced equation.
fn back_substitute(solved: &SolvedVar, u: usize, u_root: &Root) -> Option<Vec<Root>> {
    let a_univ = to_univariate_padded(&solved.a, u);
    let b_univ = to_univariate_padded(&solved.b, u);
    let mut theta = vec![Root::Approx(0.0), Root::Approx(0.0)];
    match u_root {
        Root::Exact(q) => {
            let a = a_univ.eval_quadratic(std::slice::from_ref(q)).unwrap();
            if a.is_zero() {
                return None;
            }
            let b = b_univ.eval_quadratic(std::slice::from_ref(q)).unwrap();
            let v = &(-&b) * &a.recip().expect("nonzero divisor");
            theta[u] = u_root.clone();
            theta[solved.var] = Root::Exact(v);
        }
        Root::Approx(x) => {
            let a = a_univ.eval_f64(&[*x]);
            if a.abs() < 1e-12 {
                return None;
            }
            theta[u] = u_root.clone();
            theta[solved.var] = Root::Approx(-b_univ.eval_f64(&[*x]) / a);
        }
    }
    Some(theta)
}

/// Real roots of a polynomial in one (possibly embedded) variable.
///
/// Degrees one and two are closed-form. Higher degrees (which arise from
/// curve restrictions of genuinely quadratic objectives) deflate bounded
/// rational roots first and fall back to sign-change bisection over the
/// domain, slightly widened, for whatever remains.
fn poly_roots(p: &Polynomial, domain: &[(Rational, Rational)]) -> Vec<Root> {
    debug_assert_eq!(p.arity(), 1);
    let mut coeffs = p.univariate_coefficients();
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    let mut roots: Vec<Root> = Vec::new();
    // x = 0 roots
    let mut shifted = false;
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        shifted = true;
    }
    if shifted {
        roots.push(Root::rational(Rational::zero()));
    }
    match coeffs.len() {
        0 | 1 => {}
        2 => {
            roots.push(Root::Exact(QuadraticNumber::from_rational(
                -&coeffs[0] / &coeffs[1],
            )));
        }
        3 => {
            roots.extend(
                quadratic_roots(&coeffs[0], &coeffs[1], &coeffs[2])
                    .into_iter()
                    .map(Root::Exact),
            );
        }
        _ => {
            let (rational, rest) = deflate_rational_roots(coeffs);
            roots.extend(rational.into_iter().map(Root::rational));
            match rest.len() {
                0 | 1 => {}
                2 => roots.push(Root::Exact(QuadraticNumber::from_rational(
                    -&rest[0] / &rest[1],
                ))),
                3 => roots.extend(
                    quadratic_roots(&rest[0], &rest[1], &rest[2])
                        .into_iter()
                        .map(Root::Exact),
                ),
                _ => {
                    let lo = domain[0].0.to_f64() - 1.0;
                    let hi = domain[0].1.to_f64() + 1.0;
                    roots.extend(
                        bisect_roots(&rest, lo, hi).into_iter().map(Root::Approx),
                    );
                }
            }
        }
    }
    roots
}

/// Roots of `c2 x^2 + c1 x + c0` with rational coefficients.
fn quadratic_roots(c0: &Rational, c1: &Rational, c2: &Rational) -> Vec<QuadraticNumber> {
    if c2.is_zero() {
        if c1.is_zero() {
            return Vec::new();
        }
        return vec![QuadraticNumber::from_rational(-c0 / c1)];
    }
    let disc = &(c1 * c1) - &(&(c2 * c0) * &Rational::of(4, 1));
    match disc.sign() {
        std::cmp::Ordering::Less => Vec::new(),
        std::cmp::Ordering::Equal => {
            vec![QuadraticNumber::from_rational(
                -c1 / &(c2 * &Rational::of(2, 1)),
            )]
        }
        std::cmp::Ordering::Greater => {
            let half = (c2 * &Rational::of(2, 1)).recip().unwrap();
            let mid = &(-c1) * &half;
            [&half, &(-&half)]
                .iter()
                .map(|b| {
                    QuadraticNumber::new(mid.clone(), (*b).clone(), disc.clone()).unwrap()
                })
                .collect()
        }
    }
}

fn float_quadratic_roots(c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c2.abs() < 1e-14 {
        if c1.abs() < 1e-14 {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    vec![(-c1 + s) / (2.0 * c2), (-c1 - s) / (2.0 * c2)]
}

/// Strips bounded rational roots, integerizing the coefficients first so
/// the rational-root bound applies.
fn deflate_rational_roots(coeffs: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let mut lcm = num_bigint::BigInt::from(1);
    for c in &coeffs {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let scale = Rational::from_big(lcm, num_bigint::BigInt::from(1)).unwrap();
    let mut coeffs: Vec<Rational> = coeffs.iter().map(|c| c * &scale).collect();
    let mut found = Vec::new();
    'outer: while coeffs.len() > 3 {
        let lead = coeffs.last().unwrap();
        let tail = &coeffs[0];
        debug_assert!(!tail.is_zero());
        let nums = bounded_divisors(&tail.abs());
        let dens = bounded_divisors(&lead.abs());
        for p in &nums {
            for q in &dens {
                for sign in [1i64, -1] {
                    let cand = &(p * &Rational::from_int(sign)) / q;
                    if eval_dense(&coeffs, &cand).is_zero() {
                        coeffs = synthetic_divide(&coeffs, &cand);
                        while coeffs.len() > 1 && coeffs[0].is_zero() {
                            coeffs.remove(0);
                            found.push(Rational::zero());
                        }
                        found.push(cand);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    (found, coeffs)
}

/// Divisors of an integer-valued rational, capped so pathological inputs
/// stay cheap (pairs `(d, m/d)` for small `d`).
fn bounded_divisors(r: &Rational) -> Vec<Rational> {
    debug_assert!(r.is_integer());
    let m = r.numer().magnitude().clone();
    let one = num_bigint::BigInt::from(1);
    let mut out = Vec::new();
    let mut d = num_bigint::BigUint::from(1u32);
    let cap = num_bigint::BigUint::from(10_000u32);
    while &d * &d <= m && d <= cap && out.len() < 200 {
        if (&m % &d) == num_bigint::BigUint::from(0u32) {
            out.push(Rational::from_big(d.clone().into(), one.clone()).unwrap());
            out.push(Rational::from_big((&m / &d).into(), one.clone()).unwrap());
        }
        d += 1u32;
    }
    out
}

fn eval_dense(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn synthetic_divide(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); coeffs.len() - 1];
    let mut carry = Rational::zero();
    for i in (0..coeffs.len() - 1).rev() {
        carry = &coeffs[i + 1] + &(&carry * root);
        out[i] = carry.clone();
    }
    out
}

fn bisect_roots(coeffs: &[Rational], lo: f64, hi: f64) -> Vec<f64> {
    let f = |x: f64| {
        let mut acc = 0.0;
        for c in coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    };
    let samples = 1024;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for s in 1..=samples {
        let x = lo + (hi - lo) * s as f64 / samples as f64;
        let fx = f(x);
        if prev_f == 0.0 {
            out.push(prev_x);
        } else if prev_f * fx < 0.0 {
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev_f;
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f == 0.0 {
        out.push(prev_x);
    }
    out
}

/// Views an arity-2 polynomial that does not involve the other variable as
/// univariate in `var`; also accepts genuinely univariate input.
fn to_univariate(p: &Polynomial, var: usize) -> Polynomial {
    if p.arity() == 1 {
        return p.clone();
    }
    let mut out = Polynomial::zero(1);
    for (exps, c) in p.terms() {
        debug_assert!(exps
            .iter()
            .enumerate()
            .all(|(i, &e)| i == var || e == 0));
        out.add_term(vec![exps[var]], c.clone());
    }
    out
}

fn to_univariate_padded(p: &Polynomial, var: usize) -> Polynomial {
    to_univariate(p, var)
}

/// Deflates a known rational root from a univariate polynomial, returning
/// dense coefficients of the quotient.
fn deflate_root(p: &Polynomial, root: &Rational) -> Vec<Rational> {
    let coeffs = p.univariate_coefficients();
    synthetic_divide(&coeffs, root)
}

/// Evaluates, deduplicates, and feasibility-checks the raw candidates.
fn assess(
    raw: Vec<RawCandidate>,
    objective: &Polynomial,
    constraints: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    for cand in raw {
        let theta: Vec<Value> = cand
            .theta
            .iter()
            .map(|r| match r {
                Root::Exact(q) => Value::Exact(q.clone()),
                Root::Approx(x) => Value::Float(*x),
            })
            .collect();
        if out.iter().any(|c| same_theta(&c.theta, &theta)) {
            continue;
        }
        let all_exact = theta.iter().all(Value::is_exact);
        let (value, feasible) = if all_exact {
            let point: Vec<QuadraticNumber> = theta
                .iter()
                .map(|v| v.as_exact().unwrap().clone())
                .collect();
            let feasible = exact_feasible(&point, constraints, domain);
            match objective.eval_quadratic(&point) {
                Ok(v) => (Value::Exact(v), feasible),
                Err(_) => (
                    Value::Float(objective.eval_f64(
                        &point.iter().map(|q| q.to_f64()).collect::<Vec<_>>(),
                    )),
                    feasible,
                ),
            }
        } else {
            let point: Vec<f64> = theta.iter().map(Value::to_f64).collect();
            (
                Value::Float(objective.eval_f64(&point)),
                float_feasible(&point, constraints, domain),
            )
        };
        out.push(Candidate {
            theta,
            value,
            provenance: cand.provenance,
            feasible,
        });
    }
    out
}

fn same_theta(a: &[Value], b: &[Value]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Value::Exact(p), Value::Exact(q)) => p == q,
            _ => (x.to_f64() - y.to_f64()).abs() <= 1e-12,
        })
}

fn exact_feasible(
    point: &[QuadraticNumber],
    constraints: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> bool {
    for (coord, (lo, hi)) in point.iter().zip(domain) {
        let lo = QuadraticNumber::from_rational(lo.clone());
        let hi = QuadraticNumber::from_rational(hi.clone());
        if coord < &lo || coord > &hi {
            return false;
        }
    }
    constraints.iter().all(|g| {
        g.eval_quadratic(point)
            .map(|v| !(&v < &QuadraticNumber::zero()))
            .unwrap_or(false)
    })
}

fn float_feasible(
    point: &[f64],
    constraints: &[Polynomial],
    domain: &[(Rational, Rational)],
) -> bool {
    const TOL: f64 = 1e-9;
    for (coord, (lo, hi)) in point.iter().zip(domain) {
        if *coord < lo.to_f64() - TOL || *coord > hi.to_f64() + TOL {
            return false;
        }
    }
    constraints.iter().all(|g| g.eval_f64(point) >= -TOL)
}

/// Minimum over the feasible candidates, if any.
pub(crate) fn feasible_minimum(candidates: &[Candidate]) -> Option<Value> {
    candidates
        .iter()
        .filter(|c| c.feasible)
        .map(|c| c.value.clone())
        .min_by(|a, b| a.compare(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    fn unit_box(k: usize) -> Vec<(Rational, Rational)> {
        vec![(r(0, 1), r(1, 1)); k]
    }

    fn quad(a: Rational, b: Rational, c: Rational) -> QuadraticNumber {
        QuadraticNumber::new(a, b, c).unwrap()
    }

    #[test]
    fn univariate_cell_from_the_three_state_example() {
        // objective -2p^2 + 2p - 1/7 with constraints p^2 >= 0,
        // 1/2 - p^2 >= 0, 1/7 >= 0 (dropped), 5/14 - (1-p)^2 >= 0,
        // (1-p)^2 >= 0: minimum sqrt(2) - 8/7 at p = sqrt(1/2).
        let p = Polynomial::variable(1, 0);
        let one_minus = Polynomial::constant(1, r(1, 1)).sub(&p);
        let objective = p
            .pow(2)
            .scale(&r(-2, 1))
            .add(&p.scale(&r(2, 1)))
            .add(&Polynomial::constant(1, r(-1, 7)));
        let constraints = vec![
            p.pow(2),
            Polynomial::constant(1, r(1, 2)).sub(&p.pow(2)),
            Polynomial::constant(1, r(5, 14)).sub(&one_minus.pow(2)),
            one_minus.pow(2),
        ];
        let cands = minimize_cell_exact(&objective, &constraints, &unit_box(1)).unwrap();
        let min = feasible_minimum(&cands).unwrap();
        let expected = quad(r(-8, 7), r(1, 1), r(2, 1));
        assert_eq!(min.as_exact().unwrap(), &expected);
        // the minimizer sqrt(1/2) is among the feasible candidates
        let root_half = quad(r(0, 1), r(1, 1), r(1, 2));
        assert!(cands.iter().any(|c| c.feasible
            && c.theta[0].as_exact() == Some(&root_half)
            && c.value.as_exact() == Some(&expected)));
    }

    #[test]
    fn infeasible_cell_has_no_feasible_candidates() {
        // p^2 - 1/2 >= 0 and (1-p)^2 - 5/14 >= 0 cannot hold together
        // inside [0, 1].
        let p = Polynomial::variable(1, 0);
        let one_minus = Polynomial::constant(1, r(1, 1)).sub(&p);
        let objective = p.pow(2).scale(&r(2, 1));
        let constraints = vec![
            p.pow(2).sub(&Polynomial::constant(1, r(1, 2))),
            one_minus.pow(2).sub(&Polynomial::constant(1, r(5, 14))),
        ];
        let cands = minimize_cell_exact(&objective, &constraints, &unit_box(1)).unwrap();
        assert!(feasible_minimum(&cands).is_none());
    }

    #[test]
    fn constant_objective_returns_feasible_value() {
        let objective = Polynomial::constant(1, r(3, 7));
        let cands = minimize_cell_exact(&objective, &[], &unit_box(1)).unwrap();
        let min = feasible_minimum(&cands).unwrap();
        assert_eq!(min.as_exact().unwrap().as_rational().unwrap(), &r(3, 7));
    }

    #[test]
    fn bivariate_stationary_point_on_hyperbola() {
        // minimize 2pq - p - q + 4/5 restricted by 2/5 - (1-p)q >= 0:
        // the curve-restricted stationary point is (1 - sqrt(2/5), sqrt(2/5)).
        let p = Polynomial::variable(2, 0);
        let q = Polynomial::variable(2, 1);
        let objective = p
            .mul(&q)
            .scale(&r(2, 1))
            .sub(&p)
            .sub(&q)
            .add(&Polynomial::constant(2, r(4, 5)));
        let one_minus_p = Polynomial::constant(2, r(1, 1)).sub(&p);
        let constraints = vec![Polynomial::constant(2, r(2, 5)).sub(&one_minus_p.mul(&q))];
        let cands = minimize_cell_exact(&objective, &constraints, &unit_box(2)).unwrap();
        let pstar = quad(r(1, 1), r(-1, 1), r(2, 5));
        let qstar = quad(r(0, 1), r(1, 1), r(2, 5));
        assert!(cands.iter().any(|c| {
            c.theta[0].as_exact() == Some(&pstar) && c.theta[1].as_exact() == Some(&qstar)
        }));
    }

    #[test]
    fn gamma_intersection_candidates() {
        // p(1-q) = mu2 and (1-p)q = mu3 intersect where
        // p^2 - (1 + mu2 - mu3) p + mu2 = 0; with mu2 = 1/10, mu3 = 2/10
        // that is p = 9/20 +- sqrt(41)/20.
        let (mu2, mu3) = (r(1, 10), r(2, 10));
        let p = Polynomial::variable(2, 0);
        let q = Polynomial::variable(2, 1);
        let one = Polynomial::constant(2, r(1, 1));
        let g1 = p.mul(&one.sub(&q)).sub(&Polynomial::constant(2, mu2));
        let g2 = one.sub(&p).mul(&q).sub(&Polynomial::constant(2, mu3));
        let objective = p.add(&q).neg();
        let cands = minimize_cell_exact(&objective, &[g1, g2], &unit_box(2)).unwrap();
        let gamma_plus = quad(r(9, 20), r(1, 20), r(41, 1));
        assert!(cands
            .iter()
            .any(|c| c.theta[0].as_exact() == Some(&gamma_plus)));
    }

    #[test]
    fn degenerate_product_constraint_splits() {
        // (1-p) q >= 0 splits into the line p = 1 and the line q = 0; the
        // engine must not lose candidates there.
        let p = Polynomial::variable(2, 0);
        let q = Polynomial::variable(2, 1);
        let g = Polynomial::constant(2, r(1, 1)).sub(&p).mul(&q);
        let objective = p.add(&q);
        let cands = minimize_cell_exact(&objective, &[g], &unit_box(2)).unwrap();
        let min = feasible_minimum(&cands).unwrap();
        assert_eq!(min.as_exact().unwrap().as_rational().unwrap(), &r(0, 1));
    }

    #[test]
    fn capability_errors() {
        let cubic = Polynomial::variable(1, 0).pow(3);
        assert!(matches!(
            minimize_cell_exact(&cubic, &[], &unit_box(1)),
            Err(Error::Capability(_))
        ));
        let three_var = Polynomial::variable(3, 0);
        assert!(matches!(
            minimize_cell_exact(&three_var, &[], &unit_box(3)),
            Err(Error::Capability(_))
        ));
    }
}
