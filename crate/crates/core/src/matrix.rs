//! Dense exact matrices and column vectors over one [`Field`].
//!
//! Indices are 0-based throughout: `Matrix::unit(f, n, 0, 1)` is the matrix
//! unit with a single 1 in row 0, column 1.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// Above this cardinality roots are never found by scanning the field.
pub const ROOT_SCAN_LIMIT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// A column vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    entries: Vec<Scalar>,
}

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Vector {
    pub fn new(field: Field, entries: Vec<Scalar>) -> Vector {
        Vector { field, entries }
    }

    pub fn zeros(field: Field, dim: usize) -> Vector {
        Vector { field, entries: vec![field.zero(); dim] }
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn basis(field: Field, dim: usize, i: usize) -> Vector {
        let mut v = Vector::zeros(field, dim);
        v.entries[i] = field.one();
        v
    }

    pub fn from_ints(field: Field, entries: &[i64]) -> Vector {
        Vector { field, entries: entries.iter().map(|&x| field.int(x)).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| self.field.is_zero(x))
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        let f = self.field;
        self.entries.iter().zip(&other.entries).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// The matrix unit with a 1 at `(i, j)` and zeros elsewhere.
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Matrix {
        let n = diag.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// Row-major data; panics if the length is not `rows * cols`.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { field, rows, cols, data }
    }

    pub fn from_ints(field: Field, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        Matrix::from_data(field, rows, cols, data.iter().map(|&x| field.int(x)).collect())
    }

    /// Builds from nested rows, validating shape and field membership.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch);
        }
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| !field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Square `n x n` matrix from its row-major vectorization.
    pub fn from_vectorized(field: Field, n: usize, v: &[Scalar]) -> Matrix {
        Matrix::from_data(field, n, n, v.to_vec())
    }

    pub fn from_columns(field: Field, dim: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..dim {
                m.data[i * cols.len() + j] = v.entries[i].clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new(self.field, (0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.field.is_zero(self.get(i, j))))
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|x| f.mul(x, c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|x| f.neg(x)).collect(), ..self.clone() }
    }

    pub fn trace(&self) -> Scalar {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "shape mismatch in matrix-vector product");
        let f = self.field;
        Vector::new(
            f,
            (0..self.rows)
                .map(|i| {
                    self.row(i).iter().zip(&v.entries).fold(f.zero(), |acc, (a, b)| {
                        if f.is_zero(a) {
                            acc
                        } else {
                            f.add(&acc, &f.mul(a, b))
                        }
                    })
                })
                .collect(),
        )
    }

    /// `self - c * I`.
    pub fn sub_scalar(&self, c: &Scalar) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.data[i * self.cols + i] = self.field.sub(self.get(i, i), c);
        }
        m
    }

    pub fn pow(&self, mut k: u64) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Reduced row-echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in c..self.cols {
                let x = f.mul(m.get(r, j), &inv);
                m.set(r, j, x);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..self.cols {
                    let x = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, rank: r, pivots }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column in ascending order.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let f = self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Vector::zeros(f, self.cols);
                v.entries[free] = f.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v.entries[p] = f.neg(reduced.get(r, free));
                }
                v
            })
            .collect()
    }

    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, reduced.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let c = self.char_poly().coeff(0);
        if self.rows % 2 == 0 {
            c
        } else {
            self.field.neg(&c)
        }
    }

    /// `det(tI - self)` by Berkowitz's division-free algorithm.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        if n == 0 {
            return Poly::one(f);
        }
        // `c` holds coefficients high to low.
        let mut c = vec![f.one(), f.neg(self.get(0, 0))];
        for r in 1..n {
            // Column vector S = A[0..r][r], row R = A[r][0..r], leading block A_r.
            let mut krylov: Vec<Scalar> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(f.one());
            toeplitz.push(f.neg(self.get(r, r)));
            for _ in 0..r {
                let dot = (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(r, j), &krylov[j])));
                toeplitz.push(f.neg(&dot));
                krylov = (0..r)
                    .map(|i| (0..r).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &krylov[j]))))
                    .collect();
            }
            let next: Vec<Scalar> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(&toeplitz[i - j], &c[j])))
                })
                .collect();
            c = next;
        }
        c.reverse();
        Poly::new(f, c)
    }

    /// Monic minimal polynomial: the first linear dependency among `I, M, M^2, ...`.
    pub fn min_poly(&self) -> Poly {
        assert!(self.is_square(), "minimal polynomial of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        // Echelonized powers, each with its combination over the powers so far.
        let mut reduced: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
        let mut power = Matrix::identity(f, n);
        for k in 0..=n {
            let mut v = power.data.clone();
            let mut combo = vec![f.zero(); k + 1];
            combo[k] = f.one();
            for (pivot, row, row_combo) in &reduced {
                if f.is_zero(&v[*pivot]) {
                    continue;
                }
                let c = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
                for (x, y) in combo.iter_mut().zip(row_combo) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            match v.iter().position(|x| !f.is_zero(x)) {
                None => return Poly::new(f, combo),
                Some(pivot) => {
                    let inv = f.inv(&v[pivot]).unwrap();
                    let v = v.iter().map(|x| f.mul(x, &inv)).collect();
                    let combo = combo.iter().map(|x| f.mul(x, &inv)).collect();
                    reduced.push((pivot, v, combo));
                }
            }
            power = &power * self;
        }
        unreachable!("Cayley-Hamilton bounds the degree by n")
    }

    /// Distinct eigenvalues lying in the ground field, in canonical order.
    pub fn eigenvalues_in_field(&self) -> Vec<Scalar> {
        self.char_poly().roots()
    }

    /// Whether the matrix is diagonalizable over its own field.
    pub fn is_diagonalizable(&self) -> bool {
        let f = self.field;
        let m = self.min_poly();
        match f.cardinality() {
            // m splits with simple roots iff m divides t^q - t.
            Some(q) => Poly::t(f).pow_mod(q, &m) == Poly::t(f).rem(&m),
            None => {
                if m.gcd(&m.derivative()).degree() != Some(0) {
                    return false;
                }
                let mut residual = m;
                for root in residual.rational_roots() {
                    let linear = Poly::new(f, vec![f.neg(&root), f.one()]);
                    residual = residual.div_rem(&linear).0;
                }
                residual.degree() == Some(0)
            }
        }
    }
}

impl Poly {
    /// Distinct roots in the ground field, in canonical order.
    ///
    /// Finite fields reduce to `gcd(self, t^q - t)` first, then either scan the
    /// field (`q <= ROOT_SCAN_LIMIT`) or split by equal-degree factorization.
    pub fn roots(&self) -> Vec<Scalar> {
        match self.field().cardinality() {
            Some(q) => {
                let split = self.split_part();
                if q <= ROOT_SCAN_LIMIT {
                    split.roots_by_scan()
                } else {
                    split.roots_by_splitting()
                }
            }
            None => self.rational_roots(),
        }
    }

    /// `gcd(self, t^q - t)`: the product of the distinct linear factors.
    pub fn split_part(&self) -> Poly {
        let f = self.field();
        let q = f.cardinality().expect("finite field");
        if self.is_zero() {
            return self.clone();
        }
        let t = Poly::t(f);
        let tq = t.pow_mod(q, self);
        self.gcd(&tq.sub(&t))
    }

    /// Roots by evaluating at every field element.
    pub fn roots_by_scan(&self) -> Vec<Scalar> {
        let f = self.field();
        f.elements().expect("finite field").filter(|x| f.is_zero(&self.eval(x))).collect()
    }

    /// Roots of a product of distinct linear factors by deterministic
    /// Cantor-Zassenhaus splitting with shifts `a = 0, 1, 2, ...`.
    pub fn roots_by_splitting(&self) -> Vec<Scalar> {
        let f = self.field();
        let q = f.cardinality().expect("finite field");
        let mut out = Vec::new();
        let mut stack = vec![self.monic()];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => out.push(f.neg(&g.coeff(0))),
                Some(_) if q == 2 => out.extend(g.roots_by_scan()),
                Some(d) => {
                    let exp = (q - 1) / 2;
                    let mut a = 0u64;
                    loop {
                        let shifted = Poly::new(f, vec![f.element(a), f.one()]);
                        let h = shifted.pow_mod(exp, &g).sub(&Poly::one(f));
                        let part = g.gcd(&h);
                        let pd = part.degree().unwrap_or(0);
                        if pd > 0 && pd < d {
                            stack.push(g.div_rem(&part).0.monic());
                            stack.push(part);
                            break;
                        }
                        a += 1;
                    }
                }
            }
        }
        sort_scalars(&mut out);
        out.dedup();
        out
    }

    /// Rational roots by the rational-root theorem on the primitive integer form.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_rational::BigRational;
        use num_traits::{One, Zero};

        let f = self.field();
        assert!(!f.is_finite(), "rational_roots needs the rational field");
        if self.is_zero() {
            return Vec::new();
        }
        let rats: Vec<BigRational> = self.coeffs().iter().map(|c| c.as_rational().unwrap().clone()).collect();
        let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let mut out = Vec::new();
        // Strip factors of t.
        let zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            out.push(f.zero());
            ints.drain(..zeros);
        }
        if ints.len() > 1 {
            let lead = ints.last().unwrap().clone();
            let constant = ints[0].clone();
            let eval = |x: &BigRational| {
                ints.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
            };
            let numers = crate::field::positive_divisors(&constant);
            let denoms = crate::field::positive_divisors(&lead);
            for a in &numers {
                for b in &denoms {
                    if !a.gcd(b).is_one() {
                        continue;
                    }
                    for sign in [1, -1] {
                        let cand = BigRational::new(a * BigInt::from(sign), b.clone());
                        if eval(&cand).is_zero() {
                            out.push(Scalar::Rational(cand));
                        }
                    }
                }
            }
        }
        sort_scalars(&mut out);
        out.dedup();
        out
    }
}

/// Canonical order: by residue, or by rational value.
pub fn sort_scalars(v: &mut [Scalar]) {
    v.sort_by(|a, b| match (a, b) {
        (Scalar::Residue(x), Scalar::Residue(y)) => x.cmp(y),
        (Scalar::Rational(x), Scalar::Rational(y)) => x.cmp(y),
        _ => core::cmp::Ordering::Equal,
    });
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        self.get(i, j)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in matrix sum");
        let f = self.field;
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| f.add(a, b)).collect(), ..self.clone() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in matrix difference");
        let f = self.field;
        Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| f.sub(a, b)).collect(), ..self.clone() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, rhs.get(k, j)));
                }
            }
        }
        out
    }
}

impl Mul<&Vector> for &Matrix {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        self.mul_vec(rhs)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rref_examples() {
        let m = Matrix::from_ints(gf(2), 2, 2, &[1, 1, 1, 1]);
        let r = m.rref();
        assert_eq!(r.reduced, Matrix::from_ints(gf(2), 2, 2, &[1, 1, 0, 0]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));

        let id = Matrix::identity(Field::rational(), 3);
        let r = id.rref();
        assert_eq!((r.reduced, r.rank, r.pivots), (id, 3, vec![0, 1, 2]));

        let z = Matrix::zeros(gf(5), 2, 2);
        let r = z.rref();
        assert_eq!((r.reduced, r.rank, r.pivots), (z, 0, vec![]));
    }

    #[test]
    fn kernel_examples() {
        let f = gf(7);
        assert_eq!(Matrix::unit(f, 2, 0, 1).kernel_basis(), vec![Vector::basis(f, 2, 0)]);
        assert!(Matrix::from_ints(f, 2, 2, &[1, 2, 3, 4]).kernel_basis().is_empty());
        let r = Field::rational();
        assert_eq!(Matrix::zeros(r, 2, 2).kernel_basis(), vec![Vector::basis(r, 2, 0), Vector::basis(r, 2, 1)]);
    }

    #[test]
    fn invert_examples() {
        let r = Field::rational();
        let m = Matrix::from_ints(r, 2, 2, &[3, 4, -4, 3]);
        let expected = Matrix::from_data(r, 2, 2, vec![q(3, 25), q(-4, 25), q(4, 25), q(3, 25)]);
        assert_eq!(m.invert().unwrap(), expected);

        let f3 = gf(3);
        let d = Matrix::from_ints(f3, 2, 2, &[1, 0, 0, 2]);
        assert_eq!(d.invert().unwrap(), d);
        assert_eq!(Matrix::from_ints(gf(2), 2, 2, &[1, 1, 1, 1]).invert(), Err(Error::Singular));
        assert_eq!(Matrix::zeros(r, 2, 3).invert(), Err(Error::ShapeMismatch));
    }

    #[test]
    fn char_poly_examples() {
        let f7 = gf(7);
        let swap = &Matrix::unit(f7, 2, 0, 1) + &Matrix::unit(f7, 2, 1, 0);
        let dinv = Matrix::from_ints(f7, 2, 2, &[1, 0, 0, 2]).invert().unwrap();
        // t^2 - 4 over GF(7).
        assert_eq!((&swap * &dinv).char_poly(), Poly::from_ints(f7, &[-4, 0, 1]));
        for f in [gf(2), gf(5), Field::rational()] {
            assert_eq!(Matrix::unit(f, 2, 0, 1).char_poly(), Poly::from_ints(f, &[0, 0, 1]));
        }
        let r = Field::rational();
        assert_eq!(Matrix::identity(r, 2).char_poly(), Poly::from_ints(r, &[1, -2, 1]));
    }

    #[test]
    fn char_poly_3x3_by_cofactor() {
        // det(tI - A) for A = [[2,1,0],[1,3,1],[0,1,4]]: t^3 - 9t^2 + 24t - 18.
        let r = Field::rational();
        let a = Matrix::from_ints(r, 3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        assert_eq!(a.char_poly(), Poly::from_ints(r, &[-18, 24, -9, 1]));
        assert_eq!(a.det(), r.int(18));
    }

    #[test]
    fn min_poly_examples() {
        for f in [gf(3), gf(7), Field::rational()] {
            assert_eq!(Matrix::identity(f, 4).min_poly(), Poly::from_ints(f, &[-1, 1]));
        }
        let f7 = gf(7);
        assert_eq!(Matrix::from_ints(f7, 2, 2, &[1, 0, 0, 2]).min_poly(), Poly::from_ints(f7, &[2, 4, 1]));
        let f2 = gf(2);
        assert_eq!(Matrix::from_ints(f2, 2, 2, &[1, 1, 1, 1]).min_poly(), Poly::from_ints(f2, &[0, 0, 1]));
        assert_eq!(Matrix::zeros(f7, 3, 3).min_poly(), Poly::t(f7));
    }

    #[test]
    fn eigenvalue_examples() {
        let f3 = gf(3);
        assert_eq!(Matrix::from_ints(f3, 2, 2, &[1, 0, 0, 2]).eigenvalues_in_field(), vec![f3.int(1), f3.int(2)]);
        assert!(Matrix::from_ints(f3, 2, 2, &[0, 1, 2, 0]).eigenvalues_in_field().is_empty());
        let r = Field::rational();
        assert!(Matrix::from_ints(r, 2, 2, &[0, 1, 1, 1]).eigenvalues_in_field().is_empty());
        let m = Matrix::from_data(r, 2, 2, vec![q(1, 2), q(0, 1), q(5, 1), q(-3, 4)]);
        assert_eq!(m.eigenvalues_in_field(), vec![q(-3, 4), q(1, 2)]);
    }

    #[test]
    fn diagonalizable_examples() {
        assert!(!Matrix::from_ints(gf(2), 2, 2, &[1, 1, 1, 1]).is_diagonalizable());
        assert!(!Matrix::from_ints(gf(3), 2, 2, &[1, 1, 1, 0]).is_diagonalizable());
        for f in [gf(2), gf(3), gf(7), Field::rational()] {
            assert!(Matrix::identity(f, 3).is_diagonalizable());
            assert!(Matrix::zeros(f, 3, 3).is_diagonalizable());
        }
        let r = Field::rational();
        assert!(Matrix::from_ints(r, 2, 2, &[2, 1, 1, 2]).is_diagonalizable());
        assert!(!Matrix::from_ints(r, 2, 2, &[0, -1, 1, 0]).is_diagonalizable());
        assert!(!Matrix::from_ints(r, 2, 2, &[0, 2, 1, 0]).is_diagonalizable());
        assert!(!Matrix::from_ints(r, 2, 2, &[1, 1, 0, 1]).is_diagonalizable());
    }

    #[test]
    fn splitting_agrees_with_scan() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let f = gf(p);
            for seed in 0..40i64 {
                let coeffs: Vec<i64> = (0..5).map(|k| (seed * 31 + k * 17 + seed * k * 7) % p as i64).collect();
                let poly = Poly::from_ints(f, &coeffs).add(&Poly::monomial(f, f.one(), 5));
                let split = poly.split_part();
                assert_eq!(split.roots_by_splitting(), split.roots_by_scan(), "p={p} poly={poly}");
                assert_eq!(split.roots_by_scan(), poly.roots_by_scan());
            }
        }
    }

    #[test]
    fn large_field_roots_use_splitting() {
        let p = 1_000_003u64;
        let f = gf(p);
        let roots = [f.int(5), f.int(77), f.int(999_999)];
        let poly = roots
            .iter()
            .fold(Poly::one(f), |acc, r| acc.mul(&Poly::new(f, vec![f.neg(r), f.one()])))
            .mul(&Poly::from_ints(f, &[2, 0, 1]));
        let mut expected = roots.to_vec();
        // t^2 + 2 has roots iff -2 is a square mod p.
        if let Some(s) = f.sqrt(&f.int(-2)) {
            expected.push(s.clone());
            expected.push(f.neg(&s));
        }
        sort_scalars(&mut expected);
        assert_eq!(poly.roots(), expected);
    }
}
