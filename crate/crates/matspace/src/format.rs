//! JSON encodings of fields, scalars, vectors, matrices, subspaces and verdicts.
//!
//! Field: `{"kind":"prime","p":7}` or `{"kind":"rational"}`.
//! Scalars are integers over a prime field and `"a/b"` strings over Q (input
//! also accepts plain integers and `"a"`). Matrix: `{"n":2,"rows":[[..],[..]]}`.
//! Subspace: `{"field":..,"n":..,"basis":[matrix,..]}`; emitted bases are canonical.

use std::str::FromStr;

use matspace_core::predicates::{Status, Verdict, Witness};
use matspace_core::{Field, MatSpace, Matrix, RowSpace, Scalar, Vector};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid field spec {0:?}, expected gf<p> or rational")]
    FieldSpec(String),
    #[error("--field {flag} disagrees with the input field {input}")]
    FieldMismatch { flag: String, input: String },
    #[error("no field given: pass --field or include \"field\" in the input")]
    MissingField,
    #[error("invalid scalar {0}")]
    Scalar(String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Core(#[from] matspace_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn malformed(what: &'static str, detail: impl Into<String>) -> FormatError {
    FormatError::Malformed { what, detail: detail.into() }
}

/// Parses `gf<p>` (case-insensitive) or `rational`/`q`.
pub fn parse_field_flag(spec: &str) -> Result<Field> {
    let lower = spec.trim().to_ascii_lowercase();
    if lower == "rational" || lower == "q" {
        return Ok(Field::rational());
    }
    let p = lower
        .strip_prefix("gf")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| FormatError::FieldSpec(spec.to_string()))?;
    Ok(Field::prime(p)?)
}

pub fn field_label(f: Field) -> String {
    match f {
        Field::Prime(p) => format!("gf{p}"),
        Field::Rational => "rational".to_string(),
    }
}

pub fn field_to_json(f: Field) -> Value {
    match f {
        Field::Prime(p) => json!({"kind": "prime", "p": p}),
        Field::Rational => json!({"kind": "rational"}),
    }
}

/// Reads `{"kind": "prime", "p": 7}`, `{"kind": "rational"}` or the flag spelling `"gf7"`.
pub fn field_from_json(v: &Value) -> Result<Field> {
    if let Some(s) = v.as_str() {
        return parse_field_flag(s);
    }
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(Field::rational()),
        Some("prime") => {
            let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| malformed("field", "prime field needs integer \"p\""))?;
            Ok(Field::prime(p)?)
        }
        _ => Err(malformed("field", v.to_string())),
    }
}

/// Picks the field from `--field` and the input's own declaration; they must agree.
pub fn resolve_field(flag: Option<Field>, declared: Option<&Value>) -> Result<Field> {
    let declared = declared.filter(|v| !v.is_null()).map(field_from_json).transpose()?;
    match (flag, declared) {
        (Some(a), Some(b)) if a != b => Err(FormatError::FieldMismatch { flag: field_label(a), input: field_label(b) }),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(FormatError::MissingField),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Residue(r) => json!(r),
        Scalar::Rational(q) => json!(format!("{}/{}", q.numer(), q.denom())),
    }
}

pub fn scalar_from_json(f: Field, v: &Value) -> Result<Scalar> {
    let text = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(FormatError::Scalar(v.to_string())),
    };
    let q = BigRational::from_str(&text).map_err(|_| FormatError::Scalar(v.to_string()))?;
    Ok(f.from_rational(&q)?)
}

pub fn scalars_to_json(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(scalar_to_json).collect())
}

pub fn scalars_from_json(f: Field, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| malformed("vector", v.to_string()))?
        .iter()
        .map(|x| scalar_from_json(f, x))
        .collect()
}

pub fn vector_to_json(v: &Vector) -> Value {
    scalars_to_json(v.entries())
}

pub fn vector_from_json(f: Field, v: &Value) -> Result<Vector> {
    Ok(Vector::new(f, scalars_from_json(f, v)?))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = m.to_rows().iter().map(|r| scalars_to_json(r)).collect();
    json!({"n": m.rows(), "rows": rows})
}

/// Square matrices only; `n` must match the row data.
pub fn matrix_from_json(f: Field, v: &Value) -> Result<Matrix> {
    let rows = v.get("rows").and_then(Value::as_array).ok_or_else(|| malformed("matrix", "missing \"rows\""))?;
    let n = match v.get("n") {
        Some(n) => n.as_u64().ok_or_else(|| malformed("matrix", "\"n\" must be an integer"))? as usize,
        None => rows.len(),
    };
    if rows.len() != n {
        return Err(malformed("matrix", format!("expected {n} rows, found {}", rows.len())));
    }
    let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| scalars_from_json(f, r)).collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != n) {
        return Err(malformed("matrix", format!("every row needs {n} entries")));
    }
    if n == 0 {
        return Ok(Matrix::zeros(f, 0, 0));
    }
    Ok(Matrix::from_rows(f, rows)?)
}

pub fn subspace_to_json(s: &MatSpace) -> Value {
    let basis: Vec<Value> = s.basis().iter().map(matrix_to_json).collect();
    json!({"field": field_to_json(s.field()), "n": s.n(), "basis": basis})
}

/// Reads a subspace, spanning the given matrices (they need not be independent).
pub fn subspace_from_json(v: &Value, flag: Option<Field>) -> Result<MatSpace> {
    let f = resolve_field(flag, v.get("field"))?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| malformed("subspace", "missing integer \"n\""))? as usize;
    if n == 0 {
        return Err(malformed("subspace", "\"n\" must be positive"));
    }
    let basis = v.get("basis").and_then(Value::as_array).ok_or_else(|| malformed("subspace", "missing \"basis\""))?;
    let mats: Vec<Matrix> = basis.iter().map(|m| matrix_from_json(f, m)).collect::<Result<_>>()?;
    if mats.iter().any(|m| m.rows() != n) {
        return Err(malformed("subspace", format!("basis matrices must be {n}x{n}")));
    }
    Ok(MatSpace::span(f, n, &mats)?)
}

pub fn rowspace_to_json(r: &RowSpace) -> Value {
    let basis: Vec<Value> = r.basis_vectors().map(scalars_to_json).collect();
    json!({"ambient": r.ambient(), "basis": basis})
}

pub fn rowspace_from_json(f: Field, v: &Value) -> Result<RowSpace> {
    let ambient = v.get("ambient").and_then(Value::as_u64).ok_or_else(|| malformed("row space", "missing \"ambient\""))? as usize;
    let basis = v.get("basis").and_then(Value::as_array).ok_or_else(|| malformed("row space", "missing \"basis\""))?;
    let vectors: Vec<Vec<Scalar>> = basis.iter().map(|b| scalars_from_json(f, b)).collect::<Result<_>>()?;
    Ok(RowSpace::span(f, ambient, &vectors)?)
}

pub fn status_label(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Unknown => "unknown",
    }
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Matrix(m) => json!({"kind": "matrix", "matrix": matrix_to_json(m)}),
        Witness::Eigenpair { matrix, eigenvalue } => {
            json!({"kind": "eigenpair", "matrix": matrix_to_json(matrix), "eigenvalue": scalar_to_json(eigenvalue)})
        }
        Witness::Vector(v) => json!({"kind": "vector", "vector": vector_to_json(v)}),
        Witness::Subspace(r) => json!({"kind": "subspace", "subspace": rowspace_to_json(r)}),
    }
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let mut out = Map::new();
    out.insert("status".into(), json!(status_label(v.status)));
    out.insert("witness".into(), v.witness.as_ref().map(witness_to_json).unwrap_or(Value::Null));
    if let Some(reason) = &v.reason {
        out.insert("reason".into(), json!(reason));
    }
    Value::Object(out)
}
