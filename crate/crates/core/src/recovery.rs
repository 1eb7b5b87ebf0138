//! Recovering `S` with `V = S Sym_n S^-1` from a subspace `V` of dimension `n(n+1)/2`.
//!
//! The pipeline checks `I_n in V`, inspects `V^perp` (irreducible, trivial
//! spectrum), solves for a symmetrizer `P` with `V = Sym_n P^-1`, diagonalizes
//! `P` by congruence and normalizes square classes. Hypothesis checks on
//! `V^perp` and on `P` are recorded but do not stop the pipeline: over finite
//! fields with `n >= 3` they fail even for `Sym_n` itself, and the algebraic
//! stages after them remain meaningful. Structural failures (dimension, no
//! identity, no invertible symmetrizer, congruence impossible) stop it.
//!
//! A square-class failure is a result: it comes with a member of `V` whose
//! characteristic polynomial is `t^(n-2) (t^2 - 1/(d_i d_1))`, which is not
//! diagonalizable over a finite field.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{Matrix, Vector};
use crate::predicates::{self, SearchConfig, Status, Verdict, Witness};
use crate::space::{MatSpace, RowSpace, StandardKind, TransformMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Dimension,
    ContainsIdentity,
    ComplementDimension,
    ComplementIrreducible,
    ComplementTrivialSpectrum,
    Symmetrizer,
    SymmetrizerChecks,
    NonIsotropic,
    Congruence,
    SquareClass,
    Similarity,
}

impl Stage {
    pub const ALL: [Stage; 11] = [
        Stage::Dimension,
        Stage::ContainsIdentity,
        Stage::ComplementDimension,
        Stage::ComplementIrreducible,
        Stage::ComplementTrivialSpectrum,
        Stage::Symmetrizer,
        Stage::SymmetrizerChecks,
        Stage::NonIsotropic,
        Stage::Congruence,
        Stage::SquareClass,
        Stage::Similarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Dimension => "dimension",
            Stage::ContainsIdentity => "contains_identity",
            Stage::ComplementDimension => "complement_dimension",
            Stage::ComplementIrreducible => "complement_irreducible",
            Stage::ComplementTrivialSpectrum => "complement_trivial_spectrum",
            Stage::Symmetrizer => "symmetrizer",
            Stage::SymmetrizerChecks => "symmetrizer_checks",
            Stage::NonIsotropic => "non_isotropic",
            Stage::Congruence => "congruence",
            Stage::SquareClass => "square_class",
            Stage::Similarity => "similarity",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Hypothesis stages never stop the pipeline.
    pub fn is_hypothesis(self) -> bool {
        matches!(self, Stage::ComplementIrreducible | Stage::ComplementTrivialSpectrum | Stage::NonIsotropic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageResult {
    pub stage: Stage,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `S` found and `S Sym_n S^-1 = V` re-verified.
    Success,
    /// As `Success`, but some hypothesis verdict is `Unknown`.
    ConditionalSuccess,
    Failed(Stage),
    /// Over Q the greedy diagonal form has a non-square ratio; not decided.
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryReport {
    pub input: MatSpace,
    pub stages: Vec<StageResult>,
    pub outcome: Outcome,
    pub symmetrizer_space: Option<MatSpace>,
    pub p: Option<Matrix>,
    pub q: Option<Matrix>,
    pub d: Option<Matrix>,
    pub scales: Option<Vec<Scalar>>,
    pub c: Option<Scalar>,
    pub s: Option<Matrix>,
    pub witness: Option<Matrix>,
    pub offending_index: Option<usize>,
}

impl RecoveryReport {
    fn new(input: MatSpace) -> RecoveryReport {
        RecoveryReport {
            input,
            stages: Vec::new(),
            outcome: Outcome::NotCertified,
            symmetrizer_space: None,
            p: None,
            q: None,
            d: None,
            scales: None,
            c: None,
            s: None,
            witness: None,
            offending_index: None,
        }
    }

    fn record(&mut self, stage: Stage, verdict: Verdict) -> Status {
        let status = verdict.status;
        self.stages.push(StageResult { stage, verdict });
        status
    }

    fn fail(mut self, stage: Stage, verdict: Verdict) -> RecoveryReport {
        self.record(stage, verdict);
        self.outcome = Outcome::Failed(stage);
        self
    }

    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Success | Outcome::ConditionalSuccess)
    }

    pub fn stage(&self, stage: Stage) -> Option<&Verdict> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| &s.verdict)
    }

    /// Whether every recorded hypothesis stage holds.
    pub fn hypotheses_hold(&self) -> bool {
        self.stages.iter().filter(|s| s.stage.is_hypothesis()).all(|s| s.verdict.is_holds())
    }
}

fn boolean(ok: bool, witness: impl FnOnce() -> Witness) -> Verdict {
    if ok {
        Verdict::holds()
    } else {
        Verdict::fails(witness())
    }
}

pub fn recover(v: &MatSpace, cfg: &SearchConfig) -> Result<RecoveryReport> {
    let f = v.field();
    let n = v.n();
    if n == 0 {
        return Err(Error::ShapeMismatch);
    }
    let mut report = RecoveryReport::new(v.clone());
    let sym = MatSpace::standard(StandardKind::Sym, n, f);
    let id = Matrix::identity(f, n);

    if v.dim() != n * (n + 1) / 2 {
        let witness = Witness::Subspace(v.row_space().clone());
        return Ok(report.fail(Stage::Dimension, Verdict::fails(witness)));
    }
    report.record(Stage::Dimension, Verdict::holds());

    if n == 1 {
        report.p = Some(id.clone());
        report.q = Some(id.clone());
        report.d = Some(id.clone());
        report.scales = Some(vec![f.one()]);
        report.c = Some(f.one());
        report.s = Some(id);
        report.record(Stage::Similarity, Verdict::holds());
        report.outcome = Outcome::Success;
        return Ok(report);
    }

    if !v.contains(&id)? {
        return Ok(report.fail(Stage::ContainsIdentity, Verdict::fails(Witness::Matrix(id))));
    }
    report.record(Stage::ContainsIdentity, Verdict::holds());

    let perp = v.orth_complement();
    let perp_ok = perp.dim() == n * (n - 1) / 2;
    let perp_verdict = boolean(perp_ok, || Witness::Subspace(perp.row_space().clone()));
    if report.record(Stage::ComplementDimension, perp_verdict) == Status::Fails {
        report.outcome = Outcome::Failed(Stage::ComplementDimension);
        return Ok(report);
    }
    report.record(Stage::ComplementIrreducible, predicates::irreducible(&perp, cfg));
    report.record(Stage::ComplementTrivialSpectrum, predicates::trivial_spectrum(&perp, cfg)?);

    let (solutions, p) = match solve_symmetrizer(v, cfg) {
        Ok(found) => found,
        Err(Error::NoInvertibleSolution) => {
            let space = symmetrizer_space(v);
            report.symmetrizer_space = Some(space.clone());
            let witness = Witness::Subspace(space.row_space().clone());
            return Ok(report.fail(Stage::Symmetrizer, Verdict::fails(witness)));
        }
        Err(e) => return Err(e),
    };
    report.symmetrizer_space = Some(solutions);
    report.p = Some(p.clone());
    report.record(Stage::Symmetrizer, Verdict::holds());

    let checks = p.is_symmetric() && p.is_invertible() && v.transform(&p, TransformMode::Right)? == sym;
    if report.record(Stage::SymmetrizerChecks, boolean(checks, || Witness::Matrix(p.clone()))) == Status::Fails {
        report.outcome = Outcome::Failed(Stage::SymmetrizerChecks);
        return Ok(report);
    }
    report.record(Stage::NonIsotropic, predicates::non_isotropic(&p, cfg));

    let (q, d) = match congruence_diagonalize(&p) {
        Ok(qd) => qd,
        Err(Error::Char2AlternatingResidual) => {
            return Ok(report.fail(Stage::Congruence, Verdict::fails(Witness::Matrix(p))));
        }
        Err(e) => return Err(e),
    };
    report.record(Stage::Congruence, Verdict::holds());

    let (q, d, scales, c) = match square_class_normalize(&d)? {
        SquareClass::Normalized { scales, c } => (q, d, scales, c),
        SquareClass::Violated { index } => {
            if let Some((r, d2)) = rebalance(&d) {
                let SquareClass::Normalized { scales, c } = square_class_normalize(&d2)? else {
                    unreachable!("rebalanced form has one square class")
                };
                (&r * &q, d2, scales, c)
            } else {
                report.offending_index = Some(index);
                // Over Q only n = 2 is decided by the greedy form.
                let verdict = if f.is_finite() || n == 2 {
                    let witness = &(&q.invert()? * &nondiag_witness(&d, index)?) * &q;
                    report.witness = Some(witness.clone());
                    report.outcome = Outcome::Failed(Stage::SquareClass);
                    Verdict::fails(Witness::Matrix(witness))
                } else {
                    report.outcome = Outcome::NotCertified;
                    Verdict::unknown("scalar normalization not certified over Q")
                };
                report.q = Some(q);
                report.d = Some(d);
                report.record(Stage::SquareClass, verdict);
                return Ok(report);
            }
        }
    };
    report.record(Stage::SquareClass, Verdict::holds());

    // T P T^T = c I with T = diag(scales) Q, hence V = T^-1 Sym T.
    let t = &Matrix::diagonal(f, &scales) * &q;
    let s = t.invert()?;
    let similar = sym.transform(&s, TransformMode::Conjugate)? == *v;
    report.q = Some(q);
    report.d = Some(d);
    report.scales = Some(scales);
    report.c = Some(c);
    report.s = Some(s.clone());
    if report.record(Stage::Similarity, boolean(similar, || Witness::Matrix(s))) == Status::Fails {
        report.outcome = Outcome::Failed(Stage::Similarity);
        return Ok(report);
    }
    let unknown = report.stages.iter().any(|s| s.verdict.status == Status::Unknown);
    report.outcome = if unknown { Outcome::ConditionalSuccess } else { Outcome::Success };
    Ok(report)
}

/// `{P : M P symmetric for every M in V}`.
pub fn symmetrizer_space(v: &MatSpace) -> MatSpace {
    let f = v.field();
    let n = v.n();
    let mut rows: Vec<Scalar> = Vec::new();
    let mut count = 0;
    for m in v.basis() {
        for r in 0..n {
            for c in r + 1..n {
                // (MP)[r][c] - (MP)[c][r] = sum_k M[r][k] P[k][c] - M[c][k] P[k][r]
                let mut row = vec![f.zero(); n * n];
                for k in 0..n {
                    row[k * n + c] = f.add(&row[k * n + c], m.get(r, k));
                    row[k * n + r] = f.sub(&row[k * n + r], m.get(c, k));
                }
                rows.extend(row);
                count += 1;
            }
        }
    }
    let system = Matrix::from_data(f, count, n * n, rows);
    let vectors: Vec<Vec<Scalar>> = system.kernel_basis().into_iter().map(Vector::into_entries).collect();
    MatSpace::from_row_space(n, RowSpace::span(f, n * n, &vectors).unwrap())
}

/// The symmetrizer space and an invertible member of it.
///
/// Tries the canonical basis first, then every element (finite field, within
/// budget) or integer combinations with coefficients in `[-3, 3]` (rationals).
pub fn solve_symmetrizer(v: &MatSpace, cfg: &SearchConfig) -> Result<(MatSpace, Matrix)> {
    let space = symmetrizer_space(v);
    if let Some(p) = space.basis().into_iter().find(Matrix::is_invertible) {
        return Ok((space, p));
    }
    let found = if v.field().is_finite() {
        match space.elements(cfg.budget) {
            Ok(mut it) => it.find(Matrix::is_invertible),
            Err(_) => None,
        }
    } else {
        let f = v.field();
        let dim = space.dim() as u32;
        let total = 7u128.saturating_pow(dim);
        if total > cfg.budget as u128 {
            None
        } else {
            (0..total as u64).find_map(|mut idx| {
                let coeffs: Vec<Scalar> = (0..dim)
                    .map(|_| {
                        let c = (idx % 7) as i64 - 3;
                        idx /= 7;
                        f.int(c)
                    })
                    .collect();
                let m = space.combination(&coeffs);
                m.is_invertible().then_some(m)
            })
        }
    };
    match found {
        Some(p) => Ok((space, p)),
        None => Err(Error::NoInvertibleSolution),
    }
}

/// Symmetric elimination: returns `(Q, D)` with `Q P Q^T = D` diagonal.
pub fn congruence_diagonalize(p: &Matrix) -> Result<(Matrix, Matrix)> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let f = p.field();
    let n = p.rows();
    let mut a = p.clone();
    let mut q = Matrix::identity(f, n);
    for k in 0..n {
        let pivot = (k..n).find(|&j| !f.is_zero(a.get(j, j)));
        let pivot = match pivot {
            Some(j) => j,
            None => {
                let off = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !f.is_zero(a.get(i, j)));
                let Some((i, j)) = off else { break };
                if f.characteristic() == 2 {
                    return Err(Error::Char2AlternatingResidual);
                }
                // e_i <- e_i + e_j makes a_ii = 2 a_ij.
                add_row_col(&mut a, &mut q, i, j, &f.one());
                i
            }
        };
        swap_row_col(&mut a, &mut q, k, pivot);
        let inv = f.inv(a.get(k, k))?;
        for i in k + 1..n {
            if f.is_zero(a.get(i, k)) {
                continue;
            }
            let factor = f.neg(&f.mul(a.get(i, k), &inv));
            add_row_col(&mut a, &mut q, i, k, &factor);
        }
    }
    Ok((q, a))
}

/// Row and column `dst += factor * src` on `a`, row op on `q`.
fn add_row_col(a: &mut Matrix, q: &mut Matrix, dst: usize, src: usize, factor: &Scalar) {
    let f = a.field();
    let n = a.rows();
    for j in 0..n {
        let x = f.add(a.get(dst, j), &f.mul(factor, a.get(src, j)));
        a.set(dst, j, x);
        let y = f.add(q.get(dst, j), &f.mul(factor, q.get(src, j)));
        q.set(dst, j, y);
    }
    for i in 0..n {
        let x = f.add(a.get(i, dst), &f.mul(factor, a.get(i, src)));
        a.set(i, dst, x);
    }
}

fn swap_row_col(a: &mut Matrix, q: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap_rows(i, j);
    q.swap_rows(i, j);
    let n = a.rows();
    for r in 0..n {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareClass {
    /// `diag(scales) D diag(scales) = c I` with `c = d_1`.
    Normalized { scales: Vec<Scalar>, c: Scalar },
    /// `d_index / d_1` is not a square.
    Violated { index: usize },
}

pub fn square_class_normalize(d: &Matrix) -> Result<SquareClass> {
    if !d.is_diagonal() {
        return Err(Error::ShapeMismatch);
    }
    let f = d.field();
    let diag = d.diagonal_entries();
    if diag.iter().any(|x| f.is_zero(x)) {
        return Err(Error::ZeroDiagonalEntry);
    }
    let Some(d1) = diag.first().cloned() else {
        return Ok(SquareClass::Normalized { scales: Vec::new(), c: f.one() });
    };
    let mut scales = Vec::with_capacity(diag.len());
    for (i, di) in diag.iter().enumerate() {
        match f.sqrt(&f.div(&d1, di)?) {
            Some(mu) => scales.push(mu),
            None => return Ok(SquareClass::Violated { index: i }),
        }
    }
    Ok(SquareClass::Normalized { scales, c: d1 })
}

/// Over `GF(q)`, `q` odd: re-diagonalizes `D` so every entry lies in one square
/// class, returning `(R, D')` with `R D R^T = D'`. `None` when no scalar
/// matrix is congruent to `D` (even size and non-square discriminant).
///
/// Uses that a nondegenerate binary form over a finite field represents every
/// nonzero value: `diag(a, b)` is rewritten as `diag(c, a b c)`.
pub fn rebalance(d: &Matrix) -> Option<(Matrix, Matrix)> {
    let f = d.field();
    let n = d.rows();
    let diag = d.diagonal_entries();
    if !f.is_finite() || f.characteristic() == 2 || n == 0 {
        return None;
    }
    let disc = diag.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
    let d1 = diag[0].clone();
    let target = if f.is_square(&f.div(&disc, &f.pow(&d1, n as u64)).ok()?) {
        d1
    } else if n % 2 == 1 {
        f.div(&disc, &f.pow(&d1, n as u64 - 1)).ok()?
    } else {
        return None;
    };
    let mut entries = diag;
    let mut r = Matrix::identity(f, n);
    for i in 0..n - 1 {
        if f.is_square(&f.div(&entries[i], &target).ok()?) {
            continue;
        }
        let (a, b) = (entries[i].clone(), entries[i + 1].clone());
        let (x, y) = represent(f, &a, &b, &target)?;
        // v = x e_i + y e_{i+1} has value c; w = -b y e_i + a x e_{i+1} is orthogonal to it.
        let mut step = Matrix::identity(f, n);
        step.set(i, i, x.clone());
        step.set(i, i + 1, y.clone());
        step.set(i + 1, i, f.neg(&f.mul(&b, &y)));
        step.set(i + 1, i + 1, f.mul(&a, &x));
        r = &step * &r;
        entries[i] = target.clone();
        entries[i + 1] = f.mul(&f.mul(&a, &b), &target);
    }
    let d2 = Matrix::diagonal(f, &entries);
    debug_assert_eq!(&(&r * d) * &r.transpose(), d2);
    Some((r, d2))
}

/// Some `(x, y)` with `a x^2 + b y^2 = c`, scanning `x = 0, 1, 2, ...`.
fn represent(f: Field, a: &Scalar, b: &Scalar, c: &Scalar) -> Option<(Scalar, Scalar)> {
    let q = f.cardinality()?;
    (0..q).find_map(|k| {
        let x = f.element(k);
        let rest = f.div(&f.sub(c, &f.mul(a, &f.mul(&x, &x))), b).ok()?;
        f.sqrt(&rest).map(|y| (x, y))
    })
}

/// `(E_{0,i} + E_{i,0}) P^-1` for diagonal `P`, when `1 / (d_i d_0)` is not a square.
pub fn nondiag_witness(p_diag: &Matrix, i: usize) -> Result<Matrix> {
    let f = p_diag.field();
    let n = p_diag.rows();
    if !p_diag.is_diagonal() || i == 0 || i >= n {
        return Err(Error::ShapeMismatch);
    }
    let (d0, di) = (p_diag.get(0, 0), p_diag.get(i, i));
    if f.is_zero(d0) || f.is_zero(di) {
        return Err(Error::ZeroDiagonalEntry);
    }
    let product_inv = f.inv(&f.mul(d0, di))?;
    if f.is_square(&product_inv) {
        return Err(Error::SquareClassNotViolated);
    }
    let swap = &Matrix::unit(f, n, 0, i) + &Matrix::unit(f, n, i, 0);
    Ok(&swap * &p_diag.invert()?)
}

/// The block maps of `M = [[a(M), R(M)], [C(M), K(M)]]` over `V`, first block of size 1.
///
/// Each map is a matrix acting on coordinate columns over the canonical basis of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMaps {
    pub n: usize,
    pub split: usize,
    pub a: Matrix,
    pub c: Matrix,
    pub r: Matrix,
    pub k: Matrix,
    /// `Ker C`.
    pub w: MatSpace,
    pub dim_c_image: usize,
    pub dim_w: usize,
    pub dim_k_image_of_w: usize,
    /// `W ∩ Ker K ∩ Ker a`.
    pub w_ker_k_ker_a: MatSpace,
}

pub fn block_a(m: &Matrix) -> Scalar {
    m.get(0, 0).clone()
}

pub fn block_c(m: &Matrix) -> Vec<Scalar> {
    (1..m.rows()).map(|i| m.get(i, 0).clone()).collect()
}

pub fn block_r(m: &Matrix) -> Vec<Scalar> {
    (1..m.cols()).map(|j| m.get(0, j).clone()).collect()
}

pub fn block_k(m: &Matrix) -> Matrix {
    let n = m.rows();
    let data = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect();
    Matrix::from_data(m.field(), n - 1, n - 1, data)
}

/// Inverse of the block split.
pub fn reassemble(a: &Scalar, r: &[Scalar], c: &[Scalar], k: &Matrix) -> Matrix {
    let n = k.rows() + 1;
    let f = k.field();
    let mut m = Matrix::zeros(f, n, n);
    m.set(0, 0, a.clone());
    for j in 1..n {
        m.set(0, j, r[j - 1].clone());
        m.set(j, 0, c[j - 1].clone());
        for i in 1..n {
            m.set(i, j, k.get(i - 1, j - 1).clone());
        }
    }
    m
}

/// For `M` with `C(M) = 0`: `K(M) pi(x) = pi(M x)` on the standard basis,
/// `pi` dropping the first coordinate.
pub fn quotient_action_holds(m: &Matrix) -> bool {
    let f = m.field();
    let n = m.rows();
    if block_c(m).iter().any(|x| !f.is_zero(x)) {
        return false;
    }
    let k = block_k(m);
    (0..n).all(|j| {
        let e = Vector::basis(f, n, j);
        let image = m.mul_vec(&e);
        let lhs = k.mul_vec(&Vector::new(f, e.entries()[1..].to_vec()));
        lhs.entries() == &image.entries()[1..]
    })
}

pub fn block_decompose(v: &MatSpace) -> Result<BlockMaps> {
    let n = v.n();
    if n < 2 {
        return Err(Error::ShapeMismatch);
    }
    let f = v.field();
    let basis = v.basis();
    let dim = basis.len();
    let columns = |extract: &dyn Fn(&Matrix) -> Vec<Scalar>, rows: usize| {
        let cols: Vec<Vector> = basis.iter().map(|m| Vector::new(f, extract(m))).collect();
        Matrix::from_columns(f, rows, &cols)
    };
    let a = columns(&|m| vec![block_a(m)], 1);
    let c = columns(&block_c, n - 1);
    let r = columns(&block_r, n - 1);
    let k = columns(&|m| block_k(m).into_data(), (n - 1) * (n - 1));

    let coords_to_space = |kernel: Vec<Vector>| -> MatSpace {
        let mats: Vec<Matrix> = kernel.iter().map(|x| v.combination(x.entries())).collect();
        MatSpace::span(f, n, &mats).unwrap()
    };
    let w = coords_to_space(c.kernel_basis());
    let dim_w = w.dim();
    let k_images: Vec<Vec<Scalar>> = w.basis().iter().map(|m| block_k(m).into_data()).collect();
    let dim_k_image_of_w = RowSpace::span(f, (n - 1) * (n - 1), &k_images)?.dim();

    let mut stacked = c.data().to_vec();
    stacked.extend_from_slice(k.data());
    stacked.extend_from_slice(a.data());
    let rows = (n - 1) + (n - 1) * (n - 1) + 1;
    let w_ker_k_ker_a = coords_to_space(Matrix::from_data(f, rows, dim, stacked).kernel_basis());

    Ok(BlockMaps {
        n,
        split: 1,
        dim_c_image: c.rank(),
        a,
        c,
        r,
        k,
        w,
        dim_w,
        dim_k_image_of_w,
        w_ker_k_ker_a,
    })
}
