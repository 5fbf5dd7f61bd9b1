//! Serde document format for model specifications, shared with the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};
use crate::models::{ImplicitCurveModel, ParametricModel};

/// One monomial: rational coefficient and an exponent vector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

/// Polynomial as a list of terms.
pub type PolynomialSpec = Vec<TermSpec>;

/// Model specification document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    HardyWeinberg,
    #[serde(rename = "independence_2x2")]
    Independence2x2,
    Parametric {
        k: usize,
        coordinates: Vec<PolynomialSpec>,
        /// Per-axis `[lo, hi]` bounds as rational strings.
        domain: Vec<[String; 2]>,
    },
    ImplicitCurve {
        f: PolynomialSpec,
    },
}

/// A validated model, either parametric or an implicit curve.
#[derive(Clone, Debug)]
pub enum BuiltModel {
    Parametric(ParametricModel),
    ImplicitCurve(ImplicitCurveModel),
}

impl ModelSpec {
    pub fn build(&self) -> Result<BuiltModel> {
        match self {
            ModelSpec::HardyWeinberg => {
                Ok(BuiltModel::Parametric(ParametricModel::hardy_weinberg()))
            }
            ModelSpec::Independence2x2 => {
                Ok(BuiltModel::Parametric(ParametricModel::independence_2x2()))
            }
            ModelSpec::Parametric {
                k,
                coordinates,
                domain,
            } => {
                let coords = coordinates
                    .iter()
                    .map(|spec| build_polynomial(*k, spec))
                    .collect::<Result<Vec<_>>>()?;
                let domain = domain
                    .iter()
                    .map(|[lo, hi]| Ok((lo.parse::<Rational>()?, hi.parse::<Rational>()?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(BuiltModel::Parametric(ParametricModel::new(
                    coords, domain,
                )?))
            }
            ModelSpec::ImplicitCurve { f } => Ok(BuiltModel::ImplicitCurve(
                ImplicitCurveModel::new(build_polynomial(3, f)?)?,
            )),
        }
    }
}

fn build_polynomial(arity: usize, spec: &PolynomialSpec) -> Result<Polynomial> {
    let mut p = Polynomial::zero(arity);
    for term in spec {
        if term.exponents.len() != arity {
            return Err(Error::InvalidModel(format!(
                "term exponent vector {:?} does not have length {arity}",
                term.exponents
            )));
        }
        p.add_term(term.exponents.clone(), term.coeff.parse()?);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tags_round_trip() {
        for (spec, expected_n) in [
            (ModelSpec::HardyWeinberg, 3),
            (ModelSpec::Independence2x2, 4),
        ] {
            let json = serde_json::to_string(&spec).unwrap();
            let parsed: ModelSpec = serde_json::from_str(&json).unwrap();
            match parsed.build().unwrap() {
                BuiltModel::Parametric(m) => assert_eq!(m.n(), expected_n),
                BuiltModel::ImplicitCurve(_) => panic!("expected parametric"),
            }
        }
        assert_eq!(
            serde_json::to_string(&ModelSpec::Independence2x2).unwrap(),
            r#"{"type":"independence_2x2"}"#
        );
    }

    #[test]
    fn parametric_spec_builds() {
        let json = r#"{
            "type": "parametric",
            "k": 1,
            "coordinates": [
                [{"coeff": "1", "exponents": [1]}],
                [{"coeff": "1", "exponents": [0]}, {"coeff": "-1", "exponents": [1]}]
            ],
            "domain": [["0", "1"]]
        }"#;
        let spec: ModelSpec = serde_json::from_str(json).unwrap();
        match spec.build().unwrap() {
            BuiltModel::Parametric(m) => {
                assert_eq!(m.n(), 2);
                assert_eq!(m.k(), 1);
            }
            _ => panic!("expected parametric"),
        }
    }

    #[test]
    fn implicit_curve_spec_builds() {
        let json = r#"{
            "type": "implicit_curve",
            "f": [
                {"coeff": "1", "exponents": [3, 0, 0]},
                {"coeff": "1", "exponents": [0, 3, 0]},
                {"coeff": "1", "exponents": [0, 0, 3]},
                {"coeff": "-4", "exponents": [1, 1, 1]}
            ]
        }"#;
        let spec: ModelSpec = serde_json::from_str(json).unwrap();
        assert!(matches!(
            spec.build().unwrap(),
            BuiltModel::ImplicitCurve(_)
        ));
    }

    #[test]
    fn invalid_term_is_rejected() {
        let spec = ModelSpec::Parametric {
            k: 2,
            coordinates: vec![vec![TermSpec {
                coeff: "1".into(),
                exponents: vec![1],
            }]],
            domain: vec![
                ["0".into(), "1".into()],
                ["0".into(), "1".into()],
            ],
        };
        assert!(spec.build().is_err());
    }
}
