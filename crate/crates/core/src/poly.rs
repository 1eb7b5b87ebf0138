//! Univariate polynomials over a [`Field`], coefficients stored low to high.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: Field, c: Scalar) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field, field.one())
    }

    /// `c * t^k`.
    pub fn monomial(field: Field, c: Scalar, k: usize) -> Poly {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// The indeterminate `t`.
    pub fn t(field: Field) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    /// Convenience constructor from small integers, low to high.
    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lead) => {
                let inv = self.field.inv(lead).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|k| f.add(&self.coeff(k), &other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|k| f.sub(&self.coeff(k), &other.coeff(k))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return (Poly::zero(f), self.clone());
        };
        let mut quot = vec![f.zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = f.mul(&rem[k + dd], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| f.mul(c, &f.int(k as i64))).collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let id = Matrix::identity(self.field, n);
        let mut acc = Matrix::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &id.scale(c);
        }
        acc
    }

    /// `self^e mod modulus`, by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = self.field.is_one(c);
            match (k, unit) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{c}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}
