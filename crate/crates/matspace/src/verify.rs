//! Transcript claims: small JSON records of checkable equalities.
//!
//! Every claim is `{"claim": kind, ...operands, "holds": bool}`. Reports compute
//! `holds` with [`evaluate`] at emission time; `verify` re-reads the operands
//! from JSON and recomputes it.

use matspace_core::census::{self, CensusConfig, PredicateSet};
use matspace_core::predicates::{self, SearchConfig};
use matspace_core::{Field, MatSpace, Matrix, Poly, TransformMode};
use serde_json::{json, Map, Value};

use crate::format::{
    self, field_from_json, matrix_from_json, rowspace_from_json, scalar_from_json, scalars_from_json,
    subspace_from_json, vector_from_json, FormatError, Result,
};
use crate::parallel::Parallel;

/// Limits shared by report generation and verification.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub budget: u64,
    pub seed: u64,
    pub cap: u128,
    pub heavy: bool,
    pub runner: Parallel,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            budget: predicates::DEFAULT_BUDGET,
            seed: 0,
            cap: census::DEFAULT_CAP,
            heavy: false,
            runner: Parallel::new(1),
        }
    }
}

impl Context {
    pub fn search(&self) -> SearchConfig {
        SearchConfig { budget: self.budget, seed: self.seed }
    }

    pub fn census(&self) -> CensusConfig {
        CensusConfig { cap: self.cap, heavy: self.heavy, budget: self.budget, ..CensusConfig::default() }
    }
}

pub fn mode_label(mode: TransformMode) -> &'static str {
    match mode {
        TransformMode::Conjugate => "conjugate",
        TransformMode::Left => "left",
        TransformMode::Right => "right",
    }
}

fn mode_from_label(s: &str) -> Option<TransformMode> {
    match s {
        "conjugate" => Some(TransformMode::Conjugate),
        "left" => Some(TransformMode::Left),
        "right" => Some(TransformMode::Right),
        _ => None,
    }
}

/// Builds a claim and records whether it holds.
pub fn claim(f: Field, ctx: &Context, kind: &str, operands: Value) -> Result<Value> {
    let mut obj = operands;
    obj["claim"] = json!(kind);
    let holds = evaluate(f, &obj, ctx)?;
    obj["holds"] = json!(holds);
    Ok(obj)
}

/// Builds a claim whose truth is already known from the computation that produced it.
pub fn claim_known(kind: &str, operands: Value, holds: bool) -> Value {
    let mut obj = operands;
    obj["claim"] = json!(kind);
    obj["holds"] = json!(holds);
    obj
}

fn get<'a>(claim: &'a Value, key: &str) -> Result<&'a Value> {
    claim.get(key).ok_or_else(|| FormatError::Malformed { what: "claim", detail: format!("missing \"{key}\"") })
}

fn get_u64(claim: &Value, key: &str) -> Result<u64> {
    get(claim, key)?
        .as_u64()
        .ok_or_else(|| FormatError::Malformed { what: "claim", detail: format!("\"{key}\" must be an integer") })
}

fn space(f: Field, claim: &Value, key: &str) -> Result<MatSpace> {
    subspace_from_json(get(claim, key)?, Some(f))
}

fn matrix(f: Field, claim: &Value, key: &str) -> Result<Matrix> {
    matrix_from_json(f, get(claim, key)?)
}

pub fn predicate_names(set: PredicateSet) -> Value {
    json!(set.names())
}

fn predicates_from(claim: &Value) -> Result<PredicateSet> {
    let names = get(claim, "predicates")?
        .as_array()
        .ok_or_else(|| FormatError::Malformed { what: "claim", detail: "\"predicates\" must be a list".into() })?;
    let names: Vec<&str> = names.iter().filter_map(Value::as_str).collect();
    PredicateSet::from_names(names.iter().copied())
        .ok_or_else(|| FormatError::Malformed { what: "claim", detail: format!("unknown predicate in {names:?}") })
}

pub fn counts_to_json(c: &census::Counts) -> Value {
    let mut out = Map::new();
    let mut put = |k: &str, v: Option<u128>| {
        if let Some(v) = v {
            out.insert(k.into(), json!(v as u64));
        }
    };
    put("diag", c.diag);
    put("ts", c.trivial_spectrum);
    put("irr", c.irreducible);
    put("ts_and_irr", c.ts_and_irr);
    put("all_selected", Some(c.all_selected));
    Value::Object(out)
}

/// Operands of a census claim.
pub fn census_operands(r: &census::CensusReport) -> Value {
    json!({
        "n": r.n, "q": r.q, "d": r.d, "cap": r.cap as u64,
        "predicates": predicate_names(r.predicates),
        "total": r.total as u64,
        "counts": counts_to_json(&r.counts),
    })
}

/// Recomputes a single claim.
pub fn evaluate(f: Field, claim: &Value, ctx: &Context) -> Result<bool> {
    let kind = get(claim, "claim")?.as_str().unwrap_or_default();
    let search = ctx.search();
    Ok(match kind {
        "dimension" => space(f, claim, "space")?.dim() as u64 == get_u64(claim, "dim")?,
        "orth_complement" => space(f, claim, "space")?.orth_complement() == space(f, claim, "complement")?,
        "contains" => space(f, claim, "space")?.contains(&matrix(f, claim, "matrix")?)?,
        "not_diagonalizable" => !matrix(f, claim, "matrix")?.is_diagonalizable(),
        "char_poly" => {
            let coeffs = scalars_from_json(f, get(claim, "coeffs")?)?;
            matrix(f, claim, "matrix")?.char_poly() == Poly::new(f, coeffs)
        }
        "transform" => {
            let mode = get(claim, "mode")?.as_str().and_then(mode_from_label).ok_or_else(|| FormatError::Malformed {
                what: "claim",
                detail: "\"mode\" must be conjugate, left or right".into(),
            })?;
            let p = matrix(f, claim, "p")?;
            match space(f, claim, "space")?.transform(&p, mode) {
                Ok(image) => image == space(f, claim, "result")?,
                Err(matspace_core::Error::Singular) => false,
                Err(e) => return Err(e.into()),
            }
        }
        "symmetric" => matrix(f, claim, "matrix")?.is_symmetric(),
        "invertible" => matrix(f, claim, "matrix")?.is_invertible(),
        "congruence" => {
            let (q, p, d) = (matrix(f, claim, "q")?, matrix(f, claim, "p")?, matrix(f, claim, "d")?);
            q.is_invertible() && d.is_diagonal() && &(&q * &p) * &q.transpose() == d
        }
        "stable_subspace" => {
            let w = rowspace_from_json(f, get(claim, "subspace")?)?;
            predicates::refutes_irreducible(&space(f, claim, "space")?, &w)
        }
        "eigenvalue" => {
            let lambda = scalar_from_json(f, get(claim, "eigenvalue")?)?;
            predicates::refutes_trivial_spectrum(&space(f, claim, "space")?, &matrix(f, claim, "matrix")?, &lambda)
        }
        "non_diagonalizable_member" => {
            predicates::refutes_diagonalizable(&space(f, claim, "space")?, &matrix(f, claim, "matrix")?)
        }
        "isotropic_vector" => {
            predicates::refutes_non_isotropic(&matrix(f, claim, "matrix")?, &vector_from_json(f, get(claim, "vector")?)?)
        }
        "non_isotropic" => predicates::non_isotropic(&matrix(f, claim, "matrix")?, &search).is_holds(),
        "satisfies" => {
            let s = space(f, claim, "space")?;
            let preds = predicates_from(claim)?;
            (!preds.diag || predicates::all_diagonalizable(&s, &search)?.is_holds())
                && (!preds.trivial_spectrum || predicates::trivial_spectrum(&s, &search)?.is_holds())
                && (!preds.irreducible || predicates::irreducible(&s, &search).is_holds())
        }
        "gaussian_binomial" => {
            let (m, d, q) = (get_u64(claim, "m")?, get_u64(claim, "d")?, get_u64(claim, "q")?);
            census::gaussian_binomial(m as usize, d as usize, q).map(|v| v as u64) == Some(get_u64(claim, "value")?)
        }
        "census" => {
            let (n, q, d) = (get_u64(claim, "n")?, get_u64(claim, "q")?, get_u64(claim, "d")?);
            let cfg = CensusConfig { cap: get_u64(claim, "cap")? as u128, ..ctx.census() };
            let report = census::census_with(n as usize, q, d as usize, predicates_from(claim)?, &cfg, &ctx.runner)?;
            report.total as u64 == get_u64(claim, "total")? && &counts_to_json(&report.counts) == get(claim, "counts")?
        }
        other => {
            return Err(FormatError::Malformed { what: "claim", detail: format!("unknown claim kind {other:?}") })
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub kind: String,
    pub recorded: bool,
    pub recomputed: bool,
}

/// Re-checks every claim of a report. Returns the claim count and the mismatches.
pub fn verify_report(report: &Value, ctx: &Context) -> Result<(usize, Vec<Mismatch>)> {
    let f = field_from_json(get(report, "field")?)?;
    let transcript = get(report, "transcript")?
        .as_array()
        .ok_or_else(|| FormatError::Malformed { what: "report", detail: "\"transcript\" must be a list".into() })?;
    let heavy = report.get("heavy").and_then(Value::as_bool).unwrap_or(false);
    let ctx = Context { heavy: ctx.heavy || heavy, ..*ctx };
    let mut mismatches = Vec::new();
    for (index, c) in transcript.iter().enumerate() {
        let recorded = get(c, "holds")?
            .as_bool()
            .ok_or_else(|| FormatError::Malformed { what: "claim", detail: "\"holds\" must be a boolean".into() })?;
        let recomputed = evaluate(f, c, &ctx)?;
        if recorded != recomputed {
            let kind = c.get("claim").and_then(Value::as_str).unwrap_or_default().to_string();
            mismatches.push(Mismatch { index, kind, recorded, recomputed });
        }
    }
    Ok((transcript.len(), mismatches))
}

pub fn field_of(report: &Value) -> Result<Field> {
    format::field_from_json(get(report, "field")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{matrix_to_json, subspace_to_json};
    use matspace_core::StandardKind;

    #[test]
    fn claims_evaluate_and_detect_tampering() {
        let f = Field::prime(3).unwrap();
        let ctx = Context::default();
        let sym = MatSpace::standard(StandardKind::Sym, 2, f);
        let alt = MatSpace::standard(StandardKind::Alt, 2, f);
        let c = claim(f, &ctx, "orth_complement", json!({"space": subspace_to_json(&sym), "complement": subspace_to_json(&alt)})).unwrap();
        assert_eq!(c["holds"], json!(true));
        let bad = claim(f, &ctx, "orth_complement", json!({"space": subspace_to_json(&sym), "complement": subspace_to_json(&sym)})).unwrap();
        assert_eq!(bad["holds"], json!(false));
        let w = Matrix::from_ints(f, 2, 2, &[0, 2, 1, 0]);
        let c = claim(f, &ctx, "char_poly", json!({"matrix": matrix_to_json(&w), "coeffs": [1, 0, 1]})).unwrap();
        assert_eq!(c["holds"], json!(true));
        assert!(evaluate(f, &json!({"claim": "nonsense"}), &ctx).is_err());
    }
}
