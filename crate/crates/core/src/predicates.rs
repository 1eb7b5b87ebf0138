//! Decision procedures on matrix subspaces.
//!
//! Each predicate returns a [`Verdict`]. A `Fails` verdict always carries a
//! witness that can be re-checked on its own with the `refutes_*` functions.
//! Over the rationals irreducibility, trivial spectrum, diagonalizability and
//! isotropy are only searched, so a clean search ends in `Unknown`.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{Matrix, Vector};
use crate::space::{MatSpace, RowSpace};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Pseudorandom elements drawn per predicate over the rationals.
pub const RATIONAL_SAMPLES: usize = 1000;
/// Pseudorandom elements whose eigenvectors seed spinning over the rationals.
pub const RATIONAL_SPIN_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Matrix(Matrix),
    Eigenpair { matrix: Matrix, eigenvalue: Scalar },
    Vector(Vector),
    Subspace(RowSpace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn holds() -> Verdict {
        Verdict { status: Status::Holds, witness: None, reason: None }
    }

    pub fn fails(witness: Witness) -> Verdict {
        Verdict { status: Status::Fails, witness: Some(witness), reason: None }
    }

    pub fn unknown(reason: &str) -> Verdict {
        Verdict { status: Status::Unknown, witness: None, reason: Some(reason.into()) }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }
}

/// Limits for exhaustive loops and the seed for rational sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, seed: 0 }
    }
}

/// Smallest subspace of `F^n` containing `v` and stable under every element of `space`.
pub fn spin(space: &MatSpace, v: &Vector) -> Result<RowSpace> {
    spin_trace(space, v).map(|(span, _)| span)
}

/// Like [`spin`], also returning the generators in the order they were added.
pub fn spin_trace(space: &MatSpace, v: &Vector) -> Result<(RowSpace, Vec<Vector>)> {
    if v.dim() != space.n() {
        return Err(Error::ShapeMismatch);
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let f = space.field();
    let mats = space.basis();
    let mut span = RowSpace::span(f, space.n(), &[v.entries().to_vec()])?;
    let mut added = alloc::vec![v.clone()];
    let mut queue = VecDeque::from([v.clone()]);
    while let Some(u) = queue.pop_front() {
        if span.dim() == space.n() {
            break;
        }
        for m in &mats {
            let w = m.mul_vec(&u);
            if !span.contains(w.entries()) {
                span = span.sum(&RowSpace::span(f, space.n(), &[w.entries().to_vec()])?);
                added.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok((span, added))
}

/// Whether `sub` is mapped into itself by every element of `space`.
pub fn is_stable(space: &MatSpace, sub: &RowSpace) -> bool {
    let f = space.field();
    space.basis().iter().all(|m| {
        sub.basis_vectors().all(|w| sub.contains(m.mul_vec(&Vector::new(f, w.to_vec())).entries()))
    })
}

/// One representative per point of the projective space `P(F^n)`: the first
/// nonzero coordinate is 1. Ordered by the position of that 1, then by the
/// trailing coordinates lexicographically.
pub fn projective_points(field: Field, n: usize) -> Result<impl Iterator<Item = Vector>> {
    let q = field.cardinality().ok_or(Error::InfiniteField)?;
    Ok((0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        let count = q.pow(tail as u32);
        (0..count).map(move |mut idx| {
            let mut entries = alloc::vec![field.zero(); n];
            entries[lead] = field.one();
            for k in (lead + 1..n).rev() {
                entries[k] = field.element(idx % q);
                idx /= q;
            }
            Vector::new(field, entries)
        })
    }))
}

/// `(q^n - 1) / (q - 1)`, saturating.
pub fn projective_point_count(q: u64, n: usize) -> u128 {
    (0..n).fold(0u128, |acc, _| acc.saturating_mul(q as u128).saturating_add(1))
}

pub fn irreducible(space: &MatSpace, cfg: &SearchConfig) -> Verdict {
    let f = space.field();
    let n = space.n();
    match f.cardinality() {
        Some(q) => {
            if projective_point_count(q, n) > cfg.budget as u128 {
                return Verdict::unknown("projective point count exceeds budget");
            }
            for v in projective_points(f, n).unwrap() {
                let span = spin(space, &v).unwrap();
                if span.dim() < n {
                    return Verdict::fails(Witness::Subspace(span));
                }
            }
            Verdict::holds()
        }
        None => {
            if n <= 1 {
                return Verdict::holds();
            }
            let mut starts: Vec<Vector> = (0..n).map(|i| Vector::basis(f, n, i)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let samples = if space.dim() == 0 { 0 } else { RATIONAL_SPIN_SAMPLES };
            for _ in 0..samples {
                let m = random_element(space, &mut rng);
                for lambda in m.eigenvalues_in_field() {
                    starts.extend(m.sub_scalar(&lambda).kernel_basis());
                }
            }
            for v in &starts {
                let span = spin(space, v).unwrap();
                if span.dim() < n {
                    return Verdict::fails(Witness::Subspace(span));
                }
            }
            Verdict::unknown("infinite field: irreducibility not decided")
        }
    }
}

fn random_element(space: &MatSpace, rng: &mut ChaCha8Rng) -> Matrix {
    let f = space.field();
    let coeffs: Vec<Scalar> = (0..space.dim()).map(|_| f.int(rng.gen_range(-3..=3))).collect();
    space.combination(&coeffs)
}

/// Basis elements first, then seeded pseudorandom combinations.
fn rational_samples(space: &MatSpace, seed: u64) -> impl Iterator<Item = Matrix> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = if space.dim() == 0 { 0 } else { RATIONAL_SAMPLES };
    space.basis().into_iter().chain((0..samples).map(move |_| random_element(space, &mut rng)))
}

pub fn all_diagonalizable(space: &MatSpace, cfg: &SearchConfig) -> Result<Verdict> {
    if space.field().is_finite() {
        for m in space.elements(cfg.budget)? {
            if !m.is_diagonalizable() {
                return Ok(Verdict::fails(Witness::Matrix(m)));
            }
        }
        return Ok(Verdict::holds());
    }
    for m in rational_samples(space, cfg.seed) {
        if !m.is_diagonalizable() {
            return Ok(Verdict::fails(Witness::Matrix(m)));
        }
    }
    Ok(Verdict::unknown("sampled"))
}

pub fn trivial_spectrum(space: &MatSpace, cfg: &SearchConfig) -> Result<Verdict> {
    let f = space.field();
    let nonzero_eigen = |m: &Matrix| m.eigenvalues_in_field().into_iter().find(|l| !f.is_zero(l));
    if f.is_finite() {
        for m in space.elements(cfg.budget)? {
            if let Some(eigenvalue) = nonzero_eigen(&m) {
                return Ok(Verdict::fails(Witness::Eigenpair { matrix: m, eigenvalue }));
            }
        }
        return Ok(Verdict::holds());
    }
    for m in rational_samples(space, cfg.seed) {
        if let Some(eigenvalue) = nonzero_eigen(&m) {
            return Ok(Verdict::fails(Witness::Eigenpair { matrix: m, eigenvalue }));
        }
    }
    Ok(Verdict::unknown("sampled"))
}

/// `x^T P x`.
pub fn quadratic_value(p: &Matrix, x: &Vector) -> Scalar {
    x.dot(&p.mul_vec(x))
}

pub fn non_isotropic(p: &Matrix, cfg: &SearchConfig) -> Verdict {
    assert!(p.is_square(), "isotropy needs a square matrix");
    let f = p.field();
    let n = p.rows();
    if f.is_finite() {
        if projective_point_count(f.cardinality().unwrap(), n) > cfg.budget as u128 {
            return Verdict::unknown("projective point count exceeds budget");
        }
        for x in projective_points(f, n).unwrap() {
            if f.is_zero(&quadratic_value(p, &x)) {
                return Verdict::fails(Witness::Vector(x));
            }
        }
        return Verdict::holds();
    }
    // Over Q, x^T P x = x^T S x for the symmetric part S.
    let half = f.ratio(1, 2).unwrap();
    let sym = (p + &p.transpose()).scale(&half);
    if is_definite(&sym) {
        return Verdict::holds();
    }
    let range = 11u128;
    if range.saturating_pow(n as u32) > cfg.budget as u128 {
        return Verdict::unknown("small-vector search exceeds budget");
    }
    let total = range.pow(n as u32) as u64;
    for idx in 1..total {
        let mut rest = idx;
        let entries: Vec<i64> = (0..n)
            .map(|_| {
                let d = (rest % 11) as i64 - 5;
                rest /= 11;
                d
            })
            .collect();
        let x = Vector::from_ints(f, &entries);
        if !x.is_zero() && f.is_zero(&quadratic_value(p, &x)) {
            return Verdict::fails(Witness::Vector(x));
        }
    }
    Verdict::unknown("infinite field: no small isotropic vector, not definite")
}

/// Positive or negative definiteness of a symmetric rational matrix, by leading minors.
fn is_definite(sym: &Matrix) -> bool {
    let f = sym.field();
    let n = sym.rows();
    let minors: Vec<Scalar> = (1..=n)
        .map(|k| {
            let data = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| sym.get(i, j).clone()).collect();
            Matrix::from_data(f, k, k, data).det()
        })
        .collect();
    let sign = |x: &Scalar| x.as_rational().map(num_traits::Signed::signum);
    let positive = minors.iter().all(|m| sign(m).is_some_and(|s| num_traits::One::is_one(&s)));
    let negative = minors.iter().enumerate().all(|(k, m)| {
        let s = sign(m).unwrap();
        if k % 2 == 0 {
            num_traits::One::is_one(&-s)
        } else {
            num_traits::One::is_one(&s)
        }
    });
    positive || negative
}

/// `w` is a nonzero proper subspace of `F^n` stable under `space`.
pub fn refutes_irreducible(space: &MatSpace, w: &RowSpace) -> bool {
    w.ambient() == space.n() && w.dim() > 0 && w.dim() < space.n() && is_stable(space, w)
}

/// `m` lies in `space` and is not diagonalizable.
pub fn refutes_diagonalizable(space: &MatSpace, m: &Matrix) -> bool {
    space.contains(m).unwrap_or(false) && !m.is_diagonalizable()
}

/// `m` lies in `space` and has the nonzero eigenvalue `lambda` (checked by rank).
pub fn refutes_trivial_spectrum(space: &MatSpace, m: &Matrix, lambda: &Scalar) -> bool {
    space.contains(m).unwrap_or(false)
        && space.field().contains(lambda)
        && !space.field().is_zero(lambda)
        && m.sub_scalar(lambda).rank() < m.rows()
}

/// `x` is nonzero and `x^T P x = 0`.
pub fn refutes_non_isotropic(p: &Matrix, x: &Vector) -> bool {
    x.dim() == p.rows() && !x.is_zero() && p.field().is_zero(&quadratic_value(p, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::StandardKind;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn upper2(f: Field) -> MatSpace {
        MatSpace::span(f, 2, &[Matrix::unit(f, 2, 0, 0), Matrix::unit(f, 2, 0, 1), Matrix::unit(f, 2, 1, 1)]).unwrap()
    }

    #[test]
    fn spin_examples() {
        let f3 = gf(3);
        let alt = MatSpace::standard(StandardKind::Alt, 2, f3);
        assert_eq!(spin(&alt, &Vector::basis(f3, 2, 0)).unwrap().dim(), 2);
        let e1 = Vector::basis(f3, 2, 0);
        let line = RowSpace::span(f3, 2, &[e1.entries().to_vec()]).unwrap();
        assert_eq!(spin(&upper2(f3), &e1).unwrap(), line);
        assert_eq!(spin(&MatSpace::zero(f3, 2), &e1).unwrap(), line);
        assert_eq!(spin(&alt, &Vector::zeros(f3, 2)), Err(Error::ZeroVector));
    }

    #[test]
    fn irreducible_examples() {
        let cfg = SearchConfig::default();
        let f3 = gf(3);
        assert!(irreducible(&MatSpace::standard(StandardKind::Alt, 2, f3), &cfg).is_holds());
        let v = irreducible(&upper2(f3), &cfg);
        assert!(v.is_fails());
        let e1 = RowSpace::span(f3, 2, &[alloc::vec![f3.one(), f3.zero()]]).unwrap();
        assert_eq!(v.witness, Some(Witness::Subspace(e1)));
        for n in 1..=3 {
            assert!(irreducible(&MatSpace::full(f3, n), &cfg).is_holds());
        }
        let q = Field::rational();
        assert!(irreducible(&upper2(q), &cfg).is_fails());
        assert_eq!(irreducible(&MatSpace::full(q, 2), &cfg).status, Status::Unknown);
    }

    #[test]
    fn diagonalizable_examples() {
        let cfg = SearchConfig::default();
        for p in [2, 3, 5, 7] {
            let f = gf(p);
            assert!(all_diagonalizable(&MatSpace::standard(StandardKind::Diagonal, 2, f), &cfg).unwrap().is_holds());
        }
        // The reported witness is the first failure in enumeration order; the
        // classical witnesses are checked separately.
        for (p, classic) in [(2, [1, 1, 1, 1]), (3, [1, 1, 1, 0])] {
            let f = gf(p);
            let sym = MatSpace::standard(StandardKind::Sym, 2, f);
            let v = all_diagonalizable(&sym, &cfg).unwrap();
            let Some(Witness::Matrix(w)) = &v.witness else { panic!("expected a matrix witness") };
            assert!(refutes_diagonalizable(&sym, w));
            assert!(refutes_diagonalizable(&sym, &Matrix::from_ints(f, 2, 2, &classic)));
        }
        let f3 = gf(3);
        let big = MatSpace::full(f3, 5);
        assert!(matches!(all_diagonalizable(&big, &cfg), Err(Error::BudgetExceeded(_))));
        let q = Field::rational();
        assert_eq!(all_diagonalizable(&MatSpace::standard(StandardKind::Diagonal, 3, q), &cfg).unwrap().status, Status::Unknown);
        assert!(all_diagonalizable(&MatSpace::standard(StandardKind::Alt, 2, q), &cfg).unwrap().is_fails());
    }

    #[test]
    fn trivial_spectrum_examples() {
        let cfg = SearchConfig::default();
        let f7 = gf(7);
        for n in 1..=3 {
            assert!(trivial_spectrum(&MatSpace::standard(StandardKind::StrictUpper, n, f7), &cfg).unwrap().is_holds());
        }
        let f3 = gf(3);
        assert!(trivial_spectrum(&MatSpace::standard(StandardKind::Alt, 2, f3), &cfg).unwrap().is_holds());
        let scalar = MatSpace::standard(StandardKind::Scalar, 2, f3);
        let v = trivial_spectrum(&scalar, &cfg).unwrap();
        assert_eq!(v.witness, Some(Witness::Eigenpair { matrix: Matrix::identity(f3, 2), eigenvalue: f3.one() }));
        let q = Field::rational();
        assert_eq!(trivial_spectrum(&MatSpace::standard(StandardKind::StrictUpper, 3, q), &cfg).unwrap().status, Status::Unknown);
        assert!(trivial_spectrum(&MatSpace::standard(StandardKind::Scalar, 3, q), &cfg).unwrap().is_fails());
    }

    #[test]
    fn isotropy_examples() {
        let cfg = SearchConfig::default();
        assert!(non_isotropic(&Matrix::identity(gf(3), 2), &cfg).is_holds());
        let f5 = gf(5);
        let v = non_isotropic(&Matrix::identity(f5, 2), &cfg);
        assert_eq!(v.witness, Some(Witness::Vector(Vector::from_ints(f5, &[1, 2]))));
        let q = Field::rational();
        for n in 1..=4 {
            assert!(non_isotropic(&Matrix::identity(q, n), &cfg).is_holds());
            assert!(non_isotropic(&Matrix::identity(q, n).neg(), &cfg).is_holds());
        }
        let hyperbolic = Matrix::from_ints(q, 2, 2, &[1, 0, 0, -1]);
        let v = non_isotropic(&hyperbolic, &cfg);
        assert!(refutes_non_isotropic(&hyperbolic, match &v.witness { Some(Witness::Vector(x)) => x, _ => panic!() }));
        // x^2 - 2y^2 is anisotropic over Q but indefinite.
        assert_eq!(non_isotropic(&Matrix::from_ints(q, 2, 2, &[1, 0, 0, -2]), &cfg).status, Status::Unknown);
    }

    #[test]
    fn projective_enumeration() {
        let f3 = gf(3);
        let pts: Vec<Vector> = projective_points(f3, 2).unwrap().collect();
        let expected: Vec<Vector> = [[1, 0], [1, 1], [1, 2], [0, 1]].iter().map(|e| Vector::from_ints(f3, e)).collect();
        assert_eq!(pts, expected);
        for (q, n) in [(2u64, 3usize), (3, 3), (5, 2), (7, 1)] {
            let count = projective_points(gf(q), n).unwrap().count() as u128;
            assert_eq!(count, projective_point_count(q, n));
        }
    }
}
