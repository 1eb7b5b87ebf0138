//! JSON reports for each command, each carrying a transcript of checkable claims.

use matspace_core::census::{self, CensusReport, ClassificationReport, MaxDiagReport, PredicateSet};
use matspace_core::predicates::{self, Status, Verdict, Witness};
use matspace_core::recovery::{self, Outcome, RecoveryReport, Stage};
use matspace_core::{Field, MatSpace, Matrix, StandardKind, TransformMode};
use serde_json::{json, Value};

use crate::format::{
    field_to_json, matrix_to_json, rowspace_to_json, scalar_to_json, scalars_to_json, subspace_to_json, vector_to_json,
    verdict_to_json, Result,
};
use crate::verify::{census_operands, claim, claim_known, counts_to_json, mode_label, predicate_names, Context};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Fails = 1,
    Input = 2,
    Unknown = 3,
    Budget = 4,
}

fn opt<T>(x: Option<&T>, to_json: impl Fn(&T) -> Value) -> Value {
    x.map(to_json).unwrap_or(Value::Null)
}

/// Claims refuting a failed predicate, built from its witness.
fn refutation(f: Field, ctx: &Context, space: &MatSpace, v: &Verdict) -> Result<Option<Value>> {
    if v.status != Status::Fails {
        return Ok(None);
    }
    let s = subspace_to_json(space);
    let c = match &v.witness {
        Some(Witness::Subspace(w)) => claim(f, ctx, "stable_subspace", json!({"space": s, "subspace": rowspace_to_json(w)}))?,
        Some(Witness::Eigenpair { matrix, eigenvalue }) => claim(
            f,
            ctx,
            "eigenvalue",
            json!({"space": s, "matrix": matrix_to_json(matrix), "eigenvalue": scalar_to_json(eigenvalue)}),
        )?,
        Some(Witness::Matrix(m)) => claim(f, ctx, "non_diagonalizable_member", json!({"space": s, "matrix": matrix_to_json(m)}))?,
        _ => return Ok(None),
    };
    Ok(Some(c))
}

fn exit_for(statuses: impl IntoIterator<Item = Status>) -> Exit {
    let statuses: Vec<Status> = statuses.into_iter().collect();
    if statuses.contains(&Status::Fails) {
        Exit::Fails
    } else if statuses.contains(&Status::Unknown) {
        Exit::Unknown
    } else {
        Exit::Ok
    }
}

pub fn analyze(space: &MatSpace, ctx: &Context) -> Result<(Value, Exit)> {
    let f = space.field();
    let search = ctx.search();
    let complement = space.orth_complement();
    let irr = predicates::irreducible(space, &search);
    let diag = predicates::all_diagonalizable(space, &search)?;
    let ts = predicates::trivial_spectrum(space, &search)?;
    let s = subspace_to_json(space);
    let mut transcript = vec![
        claim(f, ctx, "dimension", json!({"space": s, "dim": space.dim()}))?,
        claim(f, ctx, "orth_complement", json!({"space": s, "complement": subspace_to_json(&complement)}))?,
    ];
    for v in [&irr, &diag, &ts] {
        transcript.extend(refutation(f, ctx, space, v)?);
    }
    let report = json!({
        "command": "analyze",
        "field": field_to_json(f),
        "seed": ctx.seed,
        "budget": ctx.budget,
        "input": s,
        "dim": space.dim(),
        "complement": subspace_to_json(&complement),
        "complement_dim": complement.dim(),
        "verdicts": {
            "irreducible": verdict_to_json(&irr),
            "all_diagonalizable": verdict_to_json(&diag),
            "trivial_spectrum": verdict_to_json(&ts),
        },
        "transcript": transcript,
    });
    Ok((report, exit_for([irr.status, diag.status, ts.status])))
}

pub fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Success => "success",
        Outcome::ConditionalSuccess => "conditional_success",
        Outcome::Failed(_) => "failed",
        Outcome::NotCertified => "not_certified",
    }
}

pub fn recover(space: &MatSpace, ctx: &Context) -> Result<(Value, Exit)> {
    let r = recovery::recover(space, &ctx.search())?;
    let report = recovery_json(&r, ctx)?;
    let exit = match r.outcome {
        Outcome::Success | Outcome::ConditionalSuccess => Exit::Ok,
        Outcome::Failed(_) => Exit::Fails,
        Outcome::NotCertified => Exit::Unknown,
    };
    Ok((report, exit))
}

pub fn recovery_json(r: &RecoveryReport, ctx: &Context) -> Result<Value> {
    let v = &r.input;
    let f = v.field();
    let n = v.n();
    let s = subspace_to_json(v);
    let sym = MatSpace::standard(StandardKind::Sym, n, f);
    let mut transcript = vec![claim(f, ctx, "dimension", json!({"space": s, "dim": v.dim()}))?];
    if r.stage(Stage::ContainsIdentity).is_some() {
        let id = matrix_to_json(&Matrix::identity(f, n));
        transcript.push(claim(f, ctx, "contains", json!({"space": s, "matrix": id}))?);
    }
    if r.stage(Stage::ComplementDimension).is_some() {
        let perp = v.orth_complement();
        transcript.push(claim(f, ctx, "orth_complement", json!({"space": s, "complement": subspace_to_json(&perp)}))?);
        for stage in [Stage::ComplementIrreducible, Stage::ComplementTrivialSpectrum] {
            if let Some(verdict) = r.stage(stage) {
                transcript.extend(refutation(f, ctx, &perp, verdict)?);
            }
        }
    }
    if let Some(p) = &r.p {
        let pj = matrix_to_json(p);
        transcript.push(claim(f, ctx, "symmetric", json!({"matrix": pj}))?);
        transcript.push(claim(f, ctx, "invertible", json!({"matrix": pj}))?);
        transcript.push(claim(
            f,
            ctx,
            "transform",
            json!({"space": s, "p": pj, "mode": mode_label(TransformMode::Right), "result": subspace_to_json(&sym)}),
        )?);
        if let Some(Verdict { status: Status::Fails, witness: Some(Witness::Vector(x)), .. }) = r.stage(Stage::NonIsotropic) {
            transcript.push(claim(f, ctx, "isotropic_vector", json!({"matrix": pj, "vector": vector_to_json(x)}))?);
        }
        if let (Some(q), Some(d)) = (&r.q, &r.d) {
            transcript.push(claim(
                f,
                ctx,
                "congruence",
                json!({"q": matrix_to_json(q), "p": pj, "d": matrix_to_json(d)}),
            )?);
        }
    }
    if let Some(sm) = &r.s {
        transcript.push(claim(
            f,
            ctx,
            "transform",
            json!({"space": subspace_to_json(&sym), "p": matrix_to_json(sm), "mode": mode_label(TransformMode::Conjugate), "result": s}),
        )?);
    }
    if let Some(w) = &r.witness {
        let wj = matrix_to_json(w);
        transcript.push(claim(f, ctx, "contains", json!({"space": s, "matrix": wj}))?);
        transcript.push(claim(f, ctx, "not_diagonalizable", json!({"matrix": wj}))?);
        let chi = w.char_poly();
        transcript.push(claim(f, ctx, "char_poly", json!({"matrix": wj, "coeffs": scalars_to_json(chi.coeffs())}))?);
    }
    let stages: Vec<Value> = r
        .stages
        .iter()
        .map(|s| json!({"stage": s.stage.name(), "verdict": verdict_to_json(&s.verdict)}))
        .collect();
    let failed_stage = match r.outcome {
        Outcome::Failed(stage) => json!(stage.name()),
        _ => Value::Null,
    };
    Ok(json!({
        "command": "recover",
        "field": field_to_json(f),
        "seed": ctx.seed,
        "budget": ctx.budget,
        "input": s,
        "outcome": outcome_label(r.outcome),
        "failed_stage": failed_stage,
        "hypotheses_hold": r.hypotheses_hold(),
        "stages": stages,
        "symmetrizer_space": opt(r.symmetrizer_space.as_ref(), subspace_to_json),
        "p": opt(r.p.as_ref(), matrix_to_json),
        "q": opt(r.q.as_ref(), matrix_to_json),
        "d": opt(r.d.as_ref(), matrix_to_json),
        "scales": opt(r.scales.as_ref(), |x| scalars_to_json(x)),
        "c": opt(r.c.as_ref(), scalar_to_json),
        "s": opt(r.s.as_ref(), matrix_to_json),
        "witness": opt(r.witness.as_ref(), matrix_to_json),
        "offending_index": r.offending_index,
        "transcript": transcript,
    }))
}

fn prime_field(q: u64) -> Result<Field> {
    Ok(Field::prime(q)?)
}

pub fn census_json(r: &CensusReport, ctx: &Context) -> Result<Value> {
    let f = prime_field(r.q)?;
    let m = r.n * r.n;
    let mut transcript = vec![
        claim(f, ctx, "gaussian_binomial", json!({"m": m, "d": r.d, "q": r.q, "value": r.total as u64}))?,
        claim_known("census", census_operands(r), true),
    ];
    for w in &r.witnesses {
        transcript.push(claim(f, ctx, "satisfies", json!({"space": subspace_to_json(w), "predicates": predicate_names(r.predicates)}))?);
        transcript.push(claim(f, ctx, "dimension", json!({"space": subspace_to_json(w), "dim": r.d}))?);
    }
    Ok(json!({
        "command": "census",
        "field": field_to_json(f),
        "n": r.n,
        "q": r.q,
        "d": r.d,
        "cap": r.cap as u64,
        "heavy": ctx.heavy,
        "predicates": predicate_names(r.predicates),
        "total": r.total as u64,
        "counts": counts_to_json(&r.counts),
        "summary": format!("{} of {}", r.counts.all_selected, r.total),
        "witnesses": r.witnesses.iter().map(subspace_to_json).collect::<Vec<_>>(),
        "partition": {"patterns": r.patterns, "units": r.units},
        "seedless": r.seedless,
        "manifest": manifest(r.n, r.q, Some(r.d), r.cap, r.predicates),
        "transcript": transcript,
    }))
}

fn manifest(n: usize, q: u64, d: Option<usize>, cap: u128, preds: PredicateSet) -> Value {
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "n": n, "q": q, "d": d, "cap": cap as u64,
        "predicates": predicate_names(preds),
    })
}

pub fn census_exit(r: &CensusReport) -> Exit {
    if r.all_satisfy() {
        Exit::Ok
    } else {
        Exit::Fails
    }
}

pub fn max_diag_json(r: &MaxDiagReport, ctx: &Context) -> Result<Value> {
    let f = prime_field(r.q)?;
    let w = subspace_to_json(&r.witness);
    let mut transcript = vec![
        claim(f, ctx, "satisfies", json!({"space": w, "predicates": ["diag"]}))?,
        claim(f, ctx, "dimension", json!({"space": w, "dim": r.d_max}))?,
    ];
    for level in &r.levels {
        transcript.push(claim_known("census", census_operands(level), true));
    }
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| json!({"d": l.d, "total": l.total as u64, "diag": l.counts.diag.map(|c| c as u64)}))
        .collect();
    let cap = r.levels.first().map(|l| l.cap).unwrap_or(census::DEFAULT_CAP);
    Ok(json!({
        "command": "max_diag",
        "field": field_to_json(f),
        "n": r.n,
        "q": r.q,
        "heavy": ctx.heavy,
        "d_max": r.d_max,
        "bound": r.n * (r.n + 1) / 2,
        "witness": w,
        "levels": levels,
        "seedless": true,
        "manifest": manifest(r.n, r.q, None, cap, PredicateSet::DIAG),
        "transcript": transcript,
    }))
}

pub fn classification_json(r: &ClassificationReport, ctx: &Context) -> Result<Value> {
    let f = prime_field(r.q)?;
    let n = r.n;
    let alt = subspace_to_json(&MatSpace::standard(StandardKind::Alt, n, f));
    let sym = subspace_to_json(&MatSpace::standard(StandardKind::Sym, n, f));
    let mut transcript = vec![
        claim_known("census", census_operands(&r.alt_census), true),
        claim_known("census", census_operands(&r.sym_census), true),
    ];
    let mut alt_instances = Vec::new();
    for inst in &r.alt_instances {
        let s = subspace_to_json(&inst.space);
        transcript.push(claim(f, ctx, "satisfies", json!({"space": s, "predicates": ["ts", "irr"]}))?);
        if let Some(p) = &inst.p {
            let pj = matrix_to_json(p);
            transcript.push(claim(f, ctx, "non_isotropic", json!({"matrix": pj}))?);
            transcript.push(claim(f, ctx, "transform", json!({"space": alt, "p": pj, "mode": "left", "result": s}))?);
        }
        alt_instances.push(json!({"space": s, "p": opt(inst.p.as_ref(), matrix_to_json)}));
    }
    let mut sym_instances = Vec::new();
    for inst in &r.sym_instances {
        let s = subspace_to_json(&inst.space);
        if let Some(sm) = &inst.s {
            let pj = matrix_to_json(sm);
            transcript.push(claim(f, ctx, "transform", json!({"space": sym, "p": pj, "mode": "conjugate", "result": s}))?);
        }
        sym_instances.push(json!({"space": s, "outcome": outcome_label(inst.outcome), "s": opt(inst.s.as_ref(), matrix_to_json)}));
    }
    Ok(json!({
        "command": "classify",
        "field": field_to_json(f),
        "n": n,
        "q": r.q,
        "heavy": ctx.heavy,
        "general_linear": r.general_linear as u64,
        "non_isotropic": r.non_isotropic as u64,
        "alt": {
            "dim": r.alt_census.d,
            "total": r.alt_census.total as u64,
            "count": r.alt_instances.len(),
            "instances": alt_instances,
            "consistent": r.alt_consistent(),
        },
        "sym": {
            "dim": r.sym_census.d,
            "total": r.sym_census.total as u64,
            "count": r.sym_instances.len(),
            "instances": sym_instances,
            "vacuous": r.sym_vacuous(),
            "consistent": r.sym_consistent(),
        },
        "seedless": true,
        "manifest": manifest(n, r.q, None, r.alt_census.cap, PredicateSet::ALL),
        "transcript": transcript,
    }))
}

pub fn classification_exit(r: &ClassificationReport) -> Exit {
    if r.alt_consistent() && r.sym_consistent() {
        Exit::Ok
    } else {
        Exit::Fails
    }
}
