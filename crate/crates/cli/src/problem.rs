//! Problem input: equation text or a matrix JSON document, plus parameter bindings.

use crate::expr::{normalize_name, parse_constant, parse_eom, render, Bindings, ParseError, ParsedSystem};
use hamiltonize::potential::PolyField;
use hamiltonize::reduction::EquationsOfMotion;
use hamiltonize::{PhaseVars, RatMatrix, Rational};
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemInput {
    Eom(String),
    Matrix(MatrixDoc),
}

/// `{"n": 2, "M": [[…]]}` or `{"n": 2, "B1": …, "B2": …}`, entries as
/// integers or expression strings such as `"-1/2"` or `"-g"`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: Option<Vec<Vec<Value>>>,
    #[serde(rename = "B1")]
    pub b1: Option<Vec<Vec<Value>>>,
    #[serde(rename = "B2")]
    pub b2: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub input: ProblemInput,
    pub params: Bindings,
}

/// A problem with every parameter substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedSystem {
    pub vars: PhaseVars,
    /// Evolution matrix on `ξ = (p, x)`.
    pub m: RatMatrix,
    /// Present for equation input and for `B₁/B₂` documents.
    pub parsed: Option<ParsedSystem>,
}

impl ResolvedSystem {
    pub fn force(&self) -> Option<&PolyField> {
        self.parsed.as_ref().map(|p| &p.force).filter(|f| !f.is_zero())
    }

    pub fn rendered(&self) -> Option<String> {
        self.parsed.as_ref().map(render)
    }
}

/// `name=value` with `value` a constant expression.
pub fn parse_binding(s: &str) -> Result<(String, Rational), ParseError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| ParseError::Input(format!("expected name=value, got `{s}`")))?;
    let name = normalize_name(k.trim());
    if name.is_empty() {
        return Err(ParseError::Input(format!("empty parameter name in `{s}`")));
    }
    Ok((name, parse_constant(v, &Bindings::new())?))
}

fn entry(v: &Value, bindings: &Bindings) -> Result<Rational, ParseError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(ParseError::Input(format!(
                "non-integer number {n}; write exact values as strings like \"1/3\""
            ))),
        },
        Value::String(s) => parse_constant(s, bindings),
        other => Err(ParseError::Input(format!("bad matrix entry {other}"))),
    }
}

fn matrix(rows: &[Vec<Value>], size: usize, name: &str, bindings: &Bindings) -> Result<RatMatrix, ParseError> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(ParseError::Input(format!("{name} must be {size}x{size}")));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|v| entry(v, bindings)).collect())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix::from_rows(rows))
}

impl ProblemSpec {
    pub fn eom(text: impl Into<String>, params: Bindings) -> Self {
        Self {
            input: ProblemInput::Eom(text.into()),
            params,
        }
    }

    /// Equation text, or a JSON document when the content starts with `{`.
    pub fn from_source(content: &str, params: Bindings) -> Result<Self, ParseError> {
        let input = if content.trim_start().starts_with('{') {
            let doc: MatrixDoc = serde_json::from_str(content).map_err(|e| ParseError::Input(e.to_string()))?;
            ProblemInput::Matrix(doc)
        } else {
            ProblemInput::Eom(content.to_string())
        };
        Ok(Self { input, params })
    }

    /// Substitutes parameters. Command-line bindings win over document ones.
    pub fn resolve(&self) -> Result<ResolvedSystem, ParseError> {
        match &self.input {
            ProblemInput::Eom(text) => {
                let parsed = parse_eom(text, &self.params)?;
                Ok(ResolvedSystem {
                    vars: PhaseVars::from_positions(parsed.positions.clone()),
                    m: parsed.eom.standard_matrix(),
                    parsed: Some(parsed),
                })
            }
            ProblemInput::Matrix(doc) => {
                let mut bindings = Bindings::new();
                for (k, v) in &doc.params {
                    bindings.insert(normalize_name(k), entry(v, &Bindings::new())?);
                }
                bindings.extend(self.params.clone());
                let n = doc.n;
                if n == 0 {
                    return Err(ParseError::Input("n must be positive".into()));
                }
                let vars = PhaseVars::default_for(n);
                match (&doc.m, &doc.b1, &doc.b2) {
                    (Some(m), None, None) => Ok(ResolvedSystem {
                        vars,
                        m: matrix(m, 2 * n, "M", &bindings)?,
                        parsed: None,
                    }),
                    (None, Some(b1), Some(b2)) => {
                        let eom = EquationsOfMotion::new(matrix(b1, n, "B1", &bindings)?, matrix(b2, n, "B2", &bindings)?)
                            .map_err(|e| ParseError::Input(e.to_string()))?;
                        let parsed = ParsedSystem {
                            positions: vars.positions.clone(),
                            force: PolyField::zero(vars.positions.clone()),
                            eom,
                        };
                        Ok(ResolvedSystem {
                            m: parsed.eom.standard_matrix(),
                            vars,
                            parsed: Some(parsed),
                        })
                    }
                    _ => Err(ParseError::Input("give exactly one of M or the pair B1, B2".into())),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hamiltonize::rational::{int, rat};

    #[test]
    fn matrix_document() {
        let doc = r#"{"n": 1, "M": [["-g", -1], [1, 0]], "params": {"γ": "1/2"}}"#;
        let spec = ProblemSpec::from_source(doc, Bindings::new()).unwrap();
        let sys = spec.resolve().unwrap();
        assert_eq!(sys.m, RatMatrix::from_rows(vec![vec![rat(-1, 2), int(-1)], vec![int(1), int(0)]]));
        assert!(sys.parsed.is_none());

        let overridden = ProblemSpec::from_source(doc, [("g".to_string(), int(3))].into()).unwrap();
        assert_eq!(overridden.resolve().unwrap().m[(0, 0)], int(-3));
    }

    #[test]
    fn block_document() {
        let doc = r#"{"n": 1, "B1": [[0]], "B2": [["-1"]]}"#;
        let sys = ProblemSpec::from_source(doc, Bindings::new()).unwrap().resolve().unwrap();
        assert_eq!(sys.m, RatMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        assert_eq!(sys.rendered().unwrap(), "x'' + x = 0");
    }

    #[test]
    fn bad_documents() {
        for doc in [
            r#"{"n": 1, "M": [[1, 2]]}"#,
            r#"{"n": 1, "M": [[0, 1], [1, 0]], "B1": [[0]], "B2": [[0]]}"#,
            r#"{"n": 1, "M": [[0.5, 1], [1, 0]]}"#,
            r#"{"n": 1, "M": [["k", 1], [1, 0]]}"#,
            r#"{"n": 1, "X": 3}"#,
        ] {
            let r = ProblemSpec::from_source(doc, Bindings::new()).and_then(|s| s.resolve());
            assert!(r.is_err(), "{doc}");
        }
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_binding("λ=1/2").unwrap(), ("l".to_string(), rat(1, 2)));
        assert_eq!(parse_binding("g=-0.1").unwrap(), ("g".to_string(), rat(-1, 10)));
        assert!(parse_binding("g").is_err());
    }
}
