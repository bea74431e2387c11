//! JSON schemas and a canonical, byte-stable emitter.

use std::fmt::Write as _;

use nalgebra::Matrix6;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::chart::{ChartParams, RotationForm};
use crate::linalg::ComplexMatrix;

const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot serialize non-finite number")]
    NonFiniteOutput,
}

impl IoError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Field { field: field.into(), message: message.into() }
    }
}

fn parse_value(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn finite_number(v: &Value, field: &str) -> Result<f64, IoError> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        Some(_) => Err(IoError::field(field, "number is not finite")),
        None => Err(IoError::field(field, format!("expected a number, found {}", type_name(v)))),
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn triple(obj: &Map<String, Value>, key: &str) -> Result<[f64; 3], IoError> {
    let v = obj.get(key).ok_or_else(|| IoError::field(key, "missing"))?;
    let arr = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| IoError::field(key, "expected an array of 3 numbers"))?;
    let mut out = [0.0; 3];
    for (k, x) in arr.iter().enumerate() {
        out[k] = finite_number(x, &format!("{key}[{k}]"))?;
    }
    Ok(out)
}

fn scalar(obj: &Map<String, Value>, key: &str) -> Result<f64, IoError> {
    let v = obj.get(key).ok_or_else(|| IoError::field(key, "missing"))?;
    finite_number(v, key)
}

const STANDARD_KEYS: [&str; 5] = ["u", "v", "alpha", "beta", "theta"];
const ROTATION_KEYS: [&str; 7] = ["phi", "n", "psi", "m", "alpha", "beta", "theta"];

/// Chart parameters in either the `(u, v)` form or the rotation form
/// `{"phi", "n", "psi", "m", "alpha", "beta", "theta"}`.
pub fn parse_chart_params(text: &str) -> Result<ChartParams, IoError> {
    chart_params_from_value(&parse_value(text)?, "")
}

pub fn chart_params_from_value(value: &Value, path: &str) -> Result<ChartParams, IoError> {
    let prefixed = |e: IoError| match e {
        IoError::Field { field, message } if !path.is_empty() => {
            IoError::Field { field: format!("{path}.{field}"), message }
        }
        other => other,
    };
    let obj = value.as_object().ok_or_else(|| {
        let name = if path.is_empty() { "<root>" } else { path };
        IoError::field(name, format!("expected an object, found {}", type_name(value)))
    })?;
    let rotation = obj.contains_key("phi") || obj.contains_key("psi");
    let allowed: &[&str] = if rotation { &ROTATION_KEYS } else { &STANDARD_KEYS };
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        let form = if rotation { "rotation form" } else { "(u, v) form" };
        return Err(prefixed(IoError::field(k.clone(), format!("unknown key for the {form}"))));
    }
    let angles = || -> Result<_, IoError> {
        Ok((triple(obj, "alpha")?, triple(obj, "beta")?, triple(obj, "theta")?))
    };
    if rotation {
        let rf = RotationForm {
            phi: scalar(obj, "phi").map_err(prefixed)?,
            n: triple(obj, "n").map_err(prefixed)?,
            psi: scalar(obj, "psi").map_err(prefixed)?,
            m: triple(obj, "m").map_err(prefixed)?,
        };
        for (key, axis) in [("n", rf.n), ("m", rf.m)] {
            let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > AXIS_TOL {
                return Err(prefixed(IoError::field(key, format!("axis norm {norm} is not 1"))));
            }
        }
        let (alpha, beta, theta) = angles().map_err(prefixed)?;
        let (u, v) = rf.to_uv();
        Ok(ChartParams { u, v, alpha, beta, theta })
    } else {
        let (alpha, beta, theta) = angles().map_err(prefixed)?;
        Ok(ChartParams {
            u: triple(obj, "u").map_err(prefixed)?,
            v: triple(obj, "v").map_err(prefixed)?,
            alpha,
            beta,
            theta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Complex4,
    Complex6,
    Real6,
}

impl MatrixKind {
    pub fn dim(self) -> usize {
        match self {
            MatrixKind::Complex4 => 4,
            MatrixKind::Complex6 | MatrixKind::Real6 => 6,
        }
    }

    pub fn is_complex(self) -> bool {
        !matches!(self, MatrixKind::Real6)
    }
}

/// A matrix on disk: `{"kind", "data", "meta"?}`; complex entries are
/// `[re, im]` pairs, real entries plain numbers, rows outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub data: Vec<Vec<Complex64>>,
    pub meta: Option<Map<String, Value>>,
}

impl MatrixFile {
    pub fn from_complex(m: &ComplexMatrix) -> Self {
        let kind = if m.dim() == 4 { MatrixKind::Complex4 } else { MatrixKind::Complex6 };
        Self { kind, data: m.rows(), meta: None }
    }

    pub fn from_real6(m: &Matrix6<f64>) -> Self {
        let data = (0..6).map(|r| (0..6).map(|c| Complex64::new(m[(r, c)], 0.0)).collect()).collect();
        Self { kind: MatrixKind::Real6, data, meta: None }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta.get_or_insert_with(Map::new).insert(key.to_string(), value);
        self
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        Self::from_value(&parse_value(text)?)
    }

    pub fn from_value(value: &Value) -> Result<Self, IoError> {
        let obj = value
            .as_object()
            .ok_or_else(|| IoError::field("<root>", "expected an object"))?;
        if let Some(k) = obj.keys().find(|k| !["kind", "data", "meta"].contains(&k.as_str())) {
            return Err(IoError::field(k.clone(), "unknown key"));
        }
        let kind_value = obj.get("kind").ok_or_else(|| IoError::field("kind", "missing"))?;
        let kind: MatrixKind = serde_json::from_value(kind_value.clone())
            .map_err(|_| IoError::field("kind", "expected one of complex4, complex6, real6"))?;
        let dim = kind.dim();
        let rows = obj
            .get("data")
            .ok_or_else(|| IoError::field("data", "missing"))?
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| IoError::field("data", format!("expected {dim} rows")))?;
        let mut data = Vec::with_capacity(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == dim)
                .ok_or_else(|| IoError::field(format!("data[{i}]"), format!("expected {dim} entries")))?;
            let mut out = Vec::with_capacity(dim);
            for (j, entry) in row.iter().enumerate() {
                let field = format!("data[{i}][{j}]");
                let z = if kind.is_complex() {
                    let pair = entry
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| IoError::field(field.as_str(), "expected an [re, im] pair"))?;
                    Complex64::new(finite_number(&pair[0], &field)?, finite_number(&pair[1], &field)?)
                } else {
                    Complex64::new(finite_number(entry, &field)?, 0.0)
                };
                out.push(z);
            }
            data.push(out);
        }
        let meta = match obj.get("meta") {
            None => None,
            Some(Value::Object(m)) => Some(m.clone()),
            Some(_) => return Err(IoError::field("meta", "expected an object")),
        };
        Ok(Self { kind, data, meta })
    }

    pub fn to_value(&self) -> Value {
        let data = self
            .data
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|z| {
                            if self.kind.is_complex() {
                                Value::Array(vec![float(z.re), float(z.im)])
                            } else {
                                float(z.re)
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("kind".into(), serde_json::to_value(self.kind).expect("enum"));
        obj.insert("data".into(), Value::Array(data));
        if let Some(meta) = &self.meta {
            obj.insert("meta".into(), Value::Object(meta.clone()));
        }
        Value::Object(obj)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let dim = self.kind.dim();
        ComplexMatrix::from_fn(dim, |r, c| self.data[r][c])
    }

    pub fn to_real6(&self) -> Option<Matrix6<f64>> {
        (self.kind == MatrixKind::Real6).then(|| Matrix6::from_fn(|r, c| self.data[r][c].re))
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Output layout: one line, or two-space indentation with numeric arrays
/// kept on one line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Pretty,
}

/// Serializes with sorted keys and every float as `{:.16e}` (17 significant
/// digits, exact round trip). Integers stay integers.
pub fn to_canonical_json(value: &Value, format: OutputFormat) -> Result<String, IoError> {
    let mut out = String::new();
    emit(value, format, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

pub fn serialize_canonical<T: Serialize>(value: &T, format: OutputFormat) -> Result<String, IoError> {
    let v = serde_json::to_value(value).map_err(|_| IoError::NonFiniteOutput)?;
    to_canonical_json(&v, format)
}

fn is_flat_scalar_array(v: &Value) -> bool {
    v.as_array().is_some_and(|items| items.iter().all(|x| !x.is_array() && !x.is_object()))
}

/// Scalars, or a row of `[re, im]` pairs.
fn stays_inline(v: &Value) -> bool {
    is_flat_scalar_array(v)
        || v.as_array().is_some_and(|items| {
            items.iter().all(|x| is_flat_scalar_array(x) && x.as_array().is_some_and(|p| p.len() == 2))
        })
}

fn emit(v: &Value, format: OutputFormat, depth: usize, out: &mut String) -> Result<(), IoError> {
    let pretty = format == OutputFormat::Pretty;
    let newline = |out: &mut String, depth: usize| {
        out.push('\n');
        out.push_str(&"  ".repeat(depth));
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").expect("string write");
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").expect("string write");
            } else {
                let x = n.as_f64().ok_or(IoError::NonFiniteOutput)?;
                if !x.is_finite() {
                    return Err(IoError::NonFiniteOutput);
                }
                write!(out, "{x:.16e}").expect("string write");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            let inline = !pretty || stays_inline(v);
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                    if inline && pretty {
                        out.push(' ');
                    }
                }
                if !inline {
                    newline(out, depth + 1);
                }
                emit(item, format, depth + 1, out)?;
            }
            if !inline && !items.is_empty() {
                newline(out, depth);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                if pretty {
                    newline(out, depth + 1);
                }
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                emit(&map[*key], format, depth + 1, out)?;
            }
            if pretty && !map.is_empty() {
                newline(out, depth);
            }
            out.push('}');
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{compose, sample_chart};

    #[test]
    fn standard_form_parses() {
        let p = parse_chart_params(
            r#"{"u":[0,0,0],"v":[1,2,3],"alpha":[0.5,0,0],"beta":[0,0,0],"theta":[0,0,1e-3]}"#,
        )
        .unwrap();
        assert_eq!(p.v, [1.0, 2.0, 3.0]);
        assert_eq!(p.theta[2], 1e-3);
    }

    #[test]
    fn rotation_form_converts() {
        let p = parse_chart_params(
            r#"{"phi":3.0,"n":[1,0,0],"psi":0,"m":[0,0,1],"alpha":[0,0,0],"beta":[0,0,0],"theta":[0,0,0]}"#,
        )
        .unwrap();
        assert_eq!(p.v, [3.0, 0.0, 0.0]);
        assert_eq!(p.u, [0.0; 3]);
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let err = parse_chart_params("{\n \"u\": [0, 0,\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 3, .. }), "{err}");
        let err = parse_chart_params(r#"{"u":[0,0],"v":[0,0,0],"alpha":[0,0,0],"beta":[0,0,0],"theta":[0,0,0]}"#)
            .unwrap_err();
        assert_eq!(err.to_string(), "field `u`: expected an array of 3 numbers");
        let err = parse_chart_params(r#"{"u":[0,0,"x"],"v":[0,0,0],"alpha":[0,0,0],"beta":[0,0,0],"theta":[0,0,0]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("u[2]"));
        let err = parse_chart_params(r#"{"u":[0,0,0],"v":[0,0,0],"alpha":[0,0,0],"beta":[0,0,0]}"#).unwrap_err();
        assert_eq!(err.to_string(), "field `theta`: missing");
        let err = parse_chart_params(r#"{"phi":1,"n":[1,1,0],"psi":0,"m":[1,0,0],"alpha":[0,0,0],"beta":[0,0,0],"theta":[0,0,0]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("field `n`"));
        let err = parse_chart_params(r#"{"u":[0,0,0],"uu":1}"#).unwrap_err();
        assert!(err.to_string().contains("uu"));
    }

    #[test]
    fn matrix_file_round_trip_is_exact() {
        let g = compose(&sample_chart(3)).g;
        let text = to_canonical_json(&MatrixFile::from_complex(&g).to_value(), OutputFormat::Json).unwrap();
        let back = MatrixFile::parse(&text).unwrap().to_complex();
        assert_eq!(back.distance(&g), 0.0);
        let again = to_canonical_json(&MatrixFile::from_complex(&back).to_value(), OutputFormat::Json).unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn pretty_output_parses_back() {
        let m = MatrixFile::from_real6(&Matrix6::identity()).with_meta("seed", Value::from(4u64));
        let text = to_canonical_json(&m.to_value(), OutputFormat::Pretty).unwrap();
        assert_eq!(MatrixFile::parse(&text).unwrap(), m);
        assert!(text.contains("\"seed\": 4"));
    }

    #[test]
    fn matrix_file_rejects_bad_shapes() {
        let err = MatrixFile::parse(r#"{"kind":"complex4","data":[[1,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("4 rows"));
        let row = "[[1,0],[0,0],[0,0],[0,0]]";
        let bad = format!(r#"{{"kind":"complex4","data":[{row},{row},{row},[[1,0],[0,0],[0,0],5]]}}"#);
        let err = MatrixFile::parse(&bad).unwrap_err();
        assert!(err.to_string().contains("data[3][3]"));
        let err = MatrixFile::parse(r#"{"kind":"complex5","data":[]}"#).unwrap_err();
        assert!(err.to_string().starts_with("field `kind`"));
    }

    #[test]
    fn canonical_floats_and_key_order() {
        let v: Value = serde_json::from_str(r#"{"b":0.1,"a":[1,-0.0,2.5e-300],"c":true}"#).unwrap();
        let s = to_canonical_json(&v, OutputFormat::Json).unwrap();
        assert_eq!(
            s,
            "{\"a\":[1,-0.0000000000000000e0,2.5000000000000000e-300],\"b\":1.0000000000000001e-1,\"c\":true}\n"
        );
    }
}
