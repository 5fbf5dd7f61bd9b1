use std::collections::BTreeMap;
use std::fmt;

use crate::exact::{QuadraticNumber, Rational};

/// Affine form `constant + sum(coefficients[i] * x_i)` over indexed variables.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// forms. Evaluation at rational or quadratic points is exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AffineForm {
    constant: Rational,
    coefficients: BTreeMap<usize, Rational>,
}

impl AffineForm {
    pub fn constant(c: Rational) -> Self {
        AffineForm {
            constant: c,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The single variable `x_i`.
    pub fn variable(i: usize) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(i, Rational::one());
        AffineForm {
            constant: Rational::zero(),
            coefficients,
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coefficients.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coefficients.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn add_term(&mut self, i: usize, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(i).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coefficients.remove(&i);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (i, c) in &other.coefficients {
            out.add_term(*i, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AffineForm {
            constant: -&self.constant,
            coefficients: self
                .coefficients
                .iter()
                .map(|(i, c)| (*i, -c))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        AffineForm {
            constant: &self.constant * k,
            coefficients: self
                .coefficients
                .iter()
                .map(|(i, c)| (*i, c * k))
                .collect(),
        }
    }

    /// Exact evaluation; panics when the point is shorter than the support.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (i, c) in &self.coefficients {
            acc += &(c * &point[*i]);
        }
        acc
    }

    /// Exact evaluation over a single quadratic extension.
    pub fn eval_quadratic(&self, point: &[QuadraticNumber]) -> QuadraticNumber {
        let mut acc = QuadraticNumber::from_rational(self.constant.clone());
        for (i, c) in &self.coefficients {
            acc = &acc + &point[*i].scale(c);
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = self.constant.to_f64();
        for (i, c) in &self.coefficients {
            acc += c.to_f64() * point[*i];
        }
        acc
    }

    /// Replaces variable `i` by the given form.
    pub fn substitute(&self, i: usize, replacement: &AffineForm) -> Self {
        match self.coefficients.get(&i) {
            None => self.clone(),
            Some(k) => {
                let mut out = self.clone();
                out.coefficients.remove(&i);
                out.add(&replacement.scale(k))
            }
        }
    }

    /// Renders with a caller-supplied variable namer, terms in index order.
    pub fn display_with<F: Fn(usize) -> String>(&self, namer: F) -> String {
        let mut s = String::new();
        let mut first = true;
        for (i, c) in &self.coefficients {
            push_term(&mut s, &mut first, c, Some(&namer(*i)));
        }
        if !self.constant.is_zero() || first {
            push_term(&mut s, &mut first, &self.constant, None);
        }
        s
    }
}

pub(crate) fn push_term(s: &mut String, first: &mut bool, coeff: &Rational, var: Option<&str>) {
    if coeff.is_zero() && var.is_some() {
        return;
    }
    let mag = coeff.abs();
    if *first {
        if coeff.is_negative() {
            s.push('-');
        }
        *first = false;
    } else if coeff.is_negative() {
        s.push_str(" - ");
    } else {
        s.push_str(" + ");
    }
    match var {
        Some(v) => {
            if mag == Rational::one() {
                s.push_str(v);
            } else {
                s.push_str(&format!("{mag}*{v}"));
            }
        }
        None => s.push_str(&mag.to_string()),
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|i| format!("x{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::of(p, q)
    }

    #[test]
    fn arithmetic_keeps_canonical_support() {
        let f = AffineForm::variable(0).scale(&r(2, 1)).add(&AffineForm::constant(r(1, 2)));
        let g = AffineForm::variable(0).scale(&r(-2, 1));
        let h = f.add(&g);
        assert!(h.is_constant());
        assert_eq!(h.constant_term(), &r(1, 2));
    }

    #[test]
    fn evaluation_is_exact() {
        // 1/2 - x0 + 3 x2
        let mut f = AffineForm::constant(r(1, 2));
        f.add_term(0, &r(-1, 1));
        f.add_term(2, &r(3, 1));
        let v = f.eval(&[r(1, 7), r(9, 1), r(1, 3)]);
        assert_eq!(v, r(1, 2) - r(1, 7) + r(1, 1));
    }

    #[test]
    fn substitution() {
        // x0 + x1 with x1 := 1 - x0  ->  1
        let f = AffineForm::variable(0).add(&AffineForm::variable(1));
        let mut repl = AffineForm::constant(r(1, 1));
        repl.add_term(0, &r(-1, 1));
        let g = f.substitute(1, &repl);
        assert!(g.is_constant());
        assert_eq!(g.constant_term(), &r(1, 1));
    }

    #[test]
    fn display_is_readable() {
        let mut f = AffineForm::constant(r(-1, 7));
        f.add_term(1, &r(2, 1));
        f.add_term(3, &r(-1, 1));
        assert_eq!(f.display_with(|i| format!("v{}", i + 1)), "2*v2 - v4 - 1/7");
        assert_eq!(AffineForm::zero().to_string(), "0");
    }
}
