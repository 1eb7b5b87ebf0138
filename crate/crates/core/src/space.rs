//! Linear subspaces held as canonical reduced row-echelon bases.
//!
//! [`RowSpace`] is a subspace of `F^m`. [`MatSpace`] is a subspace of `Mat_n(F)`,
//! stored as a `RowSpace` of row-major vectorized matrices (`m = n^2`). Because
//! the basis is the unique RREF basis, two spaces are equal exactly when their
//! stored bases are equal, so the derived `PartialEq` is subspace equality.
//!
//! The trace form is `tr(AB) = sum_{i,j} A[i][j] * B[j][i]`, which is the plain
//! dot product of `vec(A^T)` with `vec(B)`. Orthogonal complements are kernels
//! of the matrix whose rows are `vec(A^T)` over a basis of the space.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowSpace {
    field: Field,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn zero(field: Field, ambient: usize) -> RowSpace {
        RowSpace { field, ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> RowSpace {
        RowSpace { field, ambient, basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Row space of `m`, canonicalized.
    pub fn row_space(m: &Matrix) -> RowSpace {
        let rref = m.rref();
        let data = rref.reduced.data()[..rref.rank * m.cols()].to_vec();
        RowSpace {
            field: m.field(),
            ambient: m.cols(),
            basis: Matrix::from_data(m.field(), rref.rank, m.cols(), data),
            pivots: rref.pivots,
        }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<RowSpace> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::ShapeMismatch);
        }
        if vectors.iter().flatten().any(|x| !field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        let data = vectors.iter().flatten().cloned().collect();
        Ok(RowSpace::row_space(&Matrix::from_data(field, vectors.len(), ambient, data)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.dim()).map(|i| self.basis.row(i))
    }

    /// Reduces `v` against the canonical basis; zero residual means membership.
    pub fn residual(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut v = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(self.basis.row(r)) {
                *x = f.sub(x, &f.mul(&c, b));
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient && self.residual(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Coordinates of `v` over the canonical basis (`None` if `v` is outside).
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        self.basis_vectors().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &RowSpace) -> RowSpace {
        let mut data = self.basis.data().to_vec();
        data.extend_from_slice(other.basis.data());
        RowSpace::row_space(&Matrix::from_data(self.field, self.dim() + other.dim(), self.ambient, data))
    }

    /// Intersection via the left kernel of the stacked bases.
    pub fn intersect(&self, other: &RowSpace) -> RowSpace {
        let f = self.field;
        let (a, b) = (self.dim(), other.dim());
        let mut data = self.basis.data().to_vec();
        data.extend_from_slice(other.basis.data());
        let stacked = Matrix::from_data(f, a + b, self.ambient, data);
        let relations = stacked.transpose().kernel_basis();
        let vectors: Vec<Vec<Scalar>> = relations.iter().map(|rel| self.combination(&rel.entries()[..a])).collect();
        let out = RowSpace::span(f, self.ambient, &vectors).expect("combinations stay in the ambient space");
        debug_assert_eq!(out.dim() + self.sum(other).dim(), a + b);
        out
    }

    /// `{x : <x, v> = 0 for all v}` under the standard dot product.
    pub fn annihilator(&self) -> RowSpace {
        let kernel = self.basis.kernel_basis();
        let vectors: Vec<Vec<Scalar>> = kernel.into_iter().map(|v| v.into_entries()).collect();
        RowSpace::span(self.field, self.ambient, &vectors).unwrap()
    }

    /// `sum_i coeffs[i] * basis_i`.
    pub fn combination(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut out = vec![f.zero(); self.ambient];
        for (c, row) in coeffs.iter().zip(self.basis_vectors()) {
            if f.is_zero(c) {
                continue;
            }
            for (x, b) in out.iter_mut().zip(row) {
                *x = f.add(x, &f.mul(c, b));
            }
        }
        out
    }

    /// Number of elements `q^dim` (`None` over an infinite field).
    pub fn element_count(&self) -> Option<u128> {
        let q = self.field.cardinality()? as u128;
        Some((0..self.dim()).fold(1u128, |acc, _| acc.saturating_mul(q)))
    }

    /// Every element exactly once; the first basis coefficient varies slowest.
    pub fn elements(&self, budget: u64) -> Result<Elements<'_>> {
        let count = self.element_count().ok_or(Error::InfiniteField)?;
        if count > budget as u128 {
            return Err(Error::BudgetExceeded(count));
        }
        Ok(Elements {
            space: self,
            q: self.field.cardinality().unwrap(),
            counters: vec![0; self.dim()],
            current: vec![self.field.zero(); self.ambient],
            done: false,
        })
    }
}

/// Odometer over all coefficient tuples of a finite-field subspace.
pub struct Elements<'a> {
    space: &'a RowSpace,
    q: u64,
    counters: Vec<u64>,
    current: Vec<Scalar>,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let f = self.space.field;
        // Bumping counter k adds basis row k; a wrap adds it a q-th time, returning it to 0.
        let mut k = self.counters.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            for (x, b) in self.current.iter_mut().zip(self.space.basis.row(k)) {
                *x = f.add(x, b);
            }
            self.counters[k] += 1;
            if self.counters[k] < self.q {
                break;
            }
            self.counters[k] = 0;
        }
        Some(out)
    }
}

/// The standard subspaces of `Mat_n(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardKind {
    Sym,
    /// `A^T = -A` with zero diagonal, in every characteristic.
    Alt,
    StrictUpper,
    Upper,
    Diagonal,
    Scalar,
    Full,
}

/// How a matrix acts on a space in [`MatSpace::transform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformMode {
    /// `P V P^-1`
    Conjugate,
    /// `P V`
    Left,
    /// `V P`
    Right,
}

/// A linear subspace of `Mat_n(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatSpace {
    n: usize,
    space: RowSpace,
}

impl MatSpace {
    pub fn zero(field: Field, n: usize) -> MatSpace {
        MatSpace { n, space: RowSpace::zero(field, n * n) }
    }

    pub fn full(field: Field, n: usize) -> MatSpace {
        MatSpace { n, space: RowSpace::full(field, n * n) }
    }

    pub fn from_row_space(n: usize, space: RowSpace) -> MatSpace {
        assert_eq!(space.ambient(), n * n, "ambient dimension must be n^2");
        MatSpace { n, space }
    }

    pub fn span(field: Field, n: usize, mats: &[Matrix]) -> Result<MatSpace> {
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::ShapeMismatch);
        }
        if mats.iter().any(|m| m.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let vectors: Vec<Vec<Scalar>> = mats.iter().map(|m| m.data().to_vec()).collect();
        Ok(MatSpace { n, space: RowSpace::span(field, n * n, &vectors)? })
    }

    pub fn standard(kind: StandardKind, n: usize, field: Field) -> MatSpace {
        let unit = |i, j| Matrix::unit(field, n, i, j);
        let mut mats = Vec::new();
        match kind {
            StandardKind::Sym => {
                for i in 0..n {
                    for j in i..n {
                        mats.push(if i == j { unit(i, i) } else { &unit(i, j) + &unit(j, i) });
                    }
                }
            }
            StandardKind::Alt => {
                for i in 0..n {
                    for j in i + 1..n {
                        mats.push(&unit(i, j) - &unit(j, i));
                    }
                }
            }
            StandardKind::StrictUpper | StandardKind::Upper => {
                let strict = kind == StandardKind::StrictUpper;
                for i in 0..n {
                    for j in i + usize::from(strict)..n {
                        mats.push(unit(i, j));
                    }
                }
            }
            StandardKind::Diagonal => mats.extend((0..n).map(|i| unit(i, i))),
            StandardKind::Scalar => mats.push(Matrix::identity(field, n)),
            StandardKind::Full => return MatSpace::full(field, n),
        }
        MatSpace::span(field, n, &mats).unwrap()
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn row_space(&self) -> &RowSpace {
        &self.space
    }

    /// Canonical basis as matrices.
    pub fn basis(&self) -> Vec<Matrix> {
        self.space.basis_vectors().map(|v| Matrix::from_vectorized(self.field(), self.n, v)).collect()
    }

    fn check_shape(&self, m: &Matrix) -> Result<()> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::ShapeMismatch);
        }
        if m.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &MatSpace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch);
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        self.check_shape(m)?;
        Ok(self.space.contains(m.data()))
    }

    pub fn is_subspace_of(&self, other: &MatSpace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.space.is_subspace_of(&other.space))
    }

    pub fn sum(&self, other: &MatSpace) -> Result<MatSpace> {
        self.check_compatible(other)?;
        Ok(MatSpace { n: self.n, space: self.space.sum(&other.space) })
    }

    pub fn intersect(&self, other: &MatSpace) -> Result<MatSpace> {
        self.check_compatible(other)?;
        Ok(MatSpace { n: self.n, space: self.space.intersect(&other.space) })
    }

    /// Structural identity of the canonical bases.
    pub fn equals(&self, other: &MatSpace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self == other)
    }

    /// Complement under the trace form `(A, B) -> tr(AB)`.
    pub fn orth_complement(&self) -> MatSpace {
        let f = self.field();
        let rows: Vec<Scalar> = self.basis().iter().flat_map(|a| a.transpose().into_data()).collect();
        let form = Matrix::from_data(f, self.dim(), self.n * self.n, rows);
        let vectors: Vec<Vec<Scalar>> = form.kernel_basis().into_iter().map(|v| v.into_entries()).collect();
        MatSpace { n: self.n, space: RowSpace::span(f, self.n * self.n, &vectors).unwrap() }
    }

    pub fn transform(&self, p: &Matrix, mode: TransformMode) -> Result<MatSpace> {
        self.check_shape(p)?;
        let mats: Vec<Matrix> = match mode {
            TransformMode::Conjugate => {
                let inv = p.invert()?;
                self.basis().iter().map(|m| &(p * m) * &inv).collect()
            }
            TransformMode::Left => self.basis().iter().map(|m| p * m).collect(),
            TransformMode::Right => self.basis().iter().map(|m| m * p).collect(),
        };
        MatSpace::span(self.field(), self.n, &mats)
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> Matrix {
        Matrix::from_vectorized(self.field(), self.n, &self.space.combination(coeffs))
    }

    pub fn element_count(&self) -> Option<u128> {
        self.space.element_count()
    }

    /// Every element exactly once, in a deterministic order.
    pub fn elements(&self, budget: u64) -> Result<impl Iterator<Item = Matrix> + '_> {
        let (f, n) = (self.field(), self.n);
        Ok(self.space.elements(budget)?.map(move |v| Matrix::from_data(f, n, n, v)))
    }
}
