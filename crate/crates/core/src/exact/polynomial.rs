use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::affine::push_term;
use crate::exact::{AffineForm, QuadraticNumber, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms map an exponent vector of fixed length (`arity`) to its nonzero
/// coefficient; degree queries and evaluation are exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn variable(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut exps = vec![0; arity];
        exps[i] = 1;
        let mut p = Self::zero(arity);
        p.add_term(exps, Rational::one());
        p
    }

    pub fn monomial(arity: usize, exponents: Vec<u32>, coeff: Rational) -> Self {
        assert_eq!(exponents.len(), arity);
        let mut p = Self::zero(arity);
        p.add_term(exponents, coeff);
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: Rational) {
        debug_assert_eq!(exponents.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exponents.clone())
            .or_insert_with(Rational::zero);
        *entry += &coeff;
        if entry.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(
                self.terms
                    .get(&vec![0; self.arity])
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(self.arity, Rational::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at a rational point; the point length must match the arity.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables evaluated at a point of length {}",
                self.arity,
                point.len()
            )));
        }
        let mut acc = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term *= &point[i].pow(e);
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Exact value at a point whose coordinates share one quadratic extension.
    pub fn eval_quadratic(&self, point: &[QuadraticNumber]) -> Result<QuadraticNumber> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables evaluated at a point of length {}",
                self.arity,
                point.len()
            )));
        }
        let mut acc = QuadraticNumber::zero();
        for (exps, coeff) in &self.terms {
            let mut term = QuadraticNumber::from_rational(coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = &term * &point[i].powi(e);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_f64();
            for (i, &e) in exps.iter().enumerate() {
                term *= point[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.arity);
        for (exps, coeff) in &self.terms {
            if exps[var] == 0 {
                continue;
            }
            let mut e = exps.clone();
            let k = Rational::from_int(e[var] as i64);
            e[var] -= 1;
            out.add_term(e, coeff * &k);
        }
        out
    }

    /// Replaces variable `var` by another polynomial of the same arity.
    pub fn substitute(&self, var: usize, replacement: &Polynomial) -> Self {
        assert_eq!(self.arity, replacement.arity);
        let mut out = Self::zero(self.arity);
        for (exps, coeff) in &self.terms {
            let mut e = exps.clone();
            let power = e[var];
            e[var] = 0;
            let base = Polynomial::monomial(self.arity, e, coeff.clone());
            out = out.add(&base.mul(&replacement.pow(power)));
        }
        out
    }

    /// Collects the coefficient polynomials of `var^j`, `j = 0..=deg`.
    /// Each returned polynomial has exponent zero in `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.arity); deg + 1];
        for (exps, coeff) in &self.terms {
            let j = exps[var] as usize;
            let mut e = exps.clone();
            e[var] = 0;
            out[j].add_term(e, coeff.clone());
        }
        out
    }

    /// Dense univariate coefficients by ascending degree (arity must be 1).
    pub fn univariate_coefficients(&self) -> Vec<Rational> {
        assert_eq!(self.arity, 1, "univariate view of a multivariate polynomial");
        let deg = self.total_degree() as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (exps, coeff) in &self.terms {
            out[exps[0] as usize] = coeff.clone();
        }
        out
    }

    /// Lifts an affine form (over variable indices `0..arity`) to a polynomial.
    pub fn from_affine(arity: usize, form: &AffineForm) -> Self {
        let mut p = Self::constant(arity, form.constant_term().clone());
        for (i, c) in form.coefficients() {
            p.add_term(
                {
                    let mut e = vec![0; arity];
                    e[i] = 1;
                    e
                },
                c.clone(),
            );
        }
        p
    }

    /// Renders terms ordered by descending total degree with named variables.
    pub fn display_with<F: Fn(usize) -> String>(&self, namer: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut entries: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        entries.sort_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d2.cmp(&d1).then_with(|| e2.cmp(e1))
        });
        let mut s = String::new();
        let mut first = true;
        for (exps, coeff) in entries {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        namer(i)
                    } else {
                        format!("{}^{}", namer(i), e)
                    }
                })
                .collect();
            if mono.is_empty() {
                push_term(&mut s, &mut first, coeff, None);
            } else {
                push_term(&mut s, &mut first, coeff, Some(&mono.join("*")));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
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
    fn eval_matches_hand_values() {
        // p^2 at 1/2
        let p = Polynomial::variable(1, 0).pow(2);
        assert_eq!(p.eval(&[r(1, 2)]).unwrap(), r(1, 4));
        // 2p(1-p) at 1/2
        let two_p = Polynomial::variable(1, 0).scale(&r(2, 1));
        let one_minus_p = Polynomial::constant(1, r(1, 1)).sub(&Polynomial::variable(1, 0));
        let f = two_p.mul(&one_minus_p);
        assert_eq!(f.eval(&[r(1, 2)]).unwrap(), r(1, 2));
        // x1^3 + x2^3 + x3^3 - 4 x1 x2 x3 at (1/3, 1/3, 1/3)
        let cube = |i| Polynomial::variable(3, i).pow(3);
        let prod = Polynomial::variable(3, 0)
            .mul(&Polynomial::variable(3, 1))
            .mul(&Polynomial::variable(3, 2))
            .scale(&r(4, 1));
        let f = cube(0).add(&cube(1)).add(&cube(2)).sub(&prod);
        assert_eq!(f.eval(&[r(1, 3), r(1, 3), r(1, 3)]).unwrap(), r(-1, 27));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = Polynomial::variable(2, 0);
        assert!(p.eval(&[r(1, 2)]).is_err());
    }

    #[test]
    fn derivative_and_substitution() {
        // f = -2p^2 + 2p - 1/7
        let p = Polynomial::variable(1, 0);
        let f = p.pow(2).scale(&r(-2, 1)).add(&p.scale(&r(2, 1))).add(
            &Polynomial::constant(1, r(-1, 7)),
        );
        let df = f.partial_derivative(0);
        assert_eq!(df.eval(&[r(1, 2)]).unwrap(), r(0, 1));
        let g = f.substitute(0, &Polynomial::constant(1, r(1, 2)));
        assert_eq!(g.constant_value().unwrap(), r(5, 14));
    }

    #[test]
    fn quadratic_evaluation_is_exact() {
        // f = -2p^2 + 2p - 1/7 at p = sqrt(1/2): expect sqrt(2) - 8/7
        let p = Polynomial::variable(1, 0);
        let f = p.pow(2).scale(&r(-2, 1)).add(&p.scale(&r(2, 1))).add(
            &Polynomial::constant(1, r(-1, 7)),
        );
        let root_half = QuadraticNumber::sqrt(r(1, 2)).unwrap();
        let v = f.eval_quadratic(&[root_half]).unwrap();
        let expected = QuadraticNumber::new(r(-8, 7), r(1, 1), r(2, 1)).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn display_orders_by_degree() {
        let p = Polynomial::variable(1, 0);
        let f = p.pow(2).scale(&r(-2, 1)).add(&p.scale(&r(2, 1))).add(
            &Polynomial::constant(1, r(-1, 7)),
        );
        assert_eq!(f.display_with(|_| "p".to_string()), "-2*p^2 + 2*p - 1/7");
    }
}
