//! Exact scalar arithmetic over GF(p) and the rationals.
//!
//! A [`Field`] is a small copyable descriptor; the arithmetic lives on it and
//! takes [`Scalar`] operands, which are plain canonical values. Mixing a residue
//! with a rational (or a residue outside `[0, p)`) is a contract violation and
//! panics in the infallible helpers; [`Field::arith`] is the checked entry point.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest accepted prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// A prime field `GF(p)` or the field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u32),
    Rational,
}

/// A field element in canonical form.
///
/// Residues are in `[0, p)`; rationals are always reduced with a positive
/// denominator (guaranteed by [`BigRational`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue(u32),
    Rational(BigRational),
}

/// Checked arithmetic request for [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue(r) => write!(f, "{r}"),
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rational => f.write_str("Q"),
        }
    }
}

impl Scalar {
    pub fn as_residue(&self) -> Option<u32> {
        match self {
            Scalar::Residue(r) => Some(*r),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `n < 4_759_123_141`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field {
    /// Validates `p` and returns `GF(p)`.
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..MAX_PRIME).contains(&p) {
            return Err(Error::Unsupported(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p as u64,
            Field::Rational => 0,
        }
    }

    /// `Some(q)` for a finite field, `None` for the rationals.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p as u64),
            Field::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Residue(0),
            Field::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Residue(1),
            Field::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    /// Image of an integer.
    pub fn int(&self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u32),
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
        }
    }

    /// Image of `num / den`; fails when `den` vanishes in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.int(den);
        self.div(&self.int(num), &d)
    }

    /// Image of an arbitrary rational. Over `GF(p)` the denominator must be a unit.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let reduce = |x: &BigInt| {
                    let r = x.mod_floor(&m);
                    let (_, digits) = r.to_u32_digits();
                    Scalar::Residue(digits.first().copied().unwrap_or(0))
                };
                self.div(&reduce(q.numer()), &reduce(q.denom()))
            }
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (Field::Prime(p), Scalar::Residue(r)) => r < p,
            (Field::Rational, Scalar::Rational(_)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Residue(r) => *r == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Residue(r) => *r == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (Field::Prime(p), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u64 + *b as u64) % *p as u64) as u32)
            }
            (Field::Rational, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(),
        }
    }

    pub fn sub(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (Field::Prime(p), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32)
            }
            (Field::Rational, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mismatch(),
        }
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (Field::Prime(p), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(mul_mod(*a as u64, *b as u64, *p as u64) as u32)
            }
            (Field::Rational, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(),
        }
    }

    pub fn neg(&self, x: &Scalar) -> Scalar {
        match (self, x) {
            (Field::Prime(p), Scalar::Residue(a)) => Scalar::Residue((*p - *a) % *p),
            (Field::Rational, Scalar::Rational(a)) => Scalar::Rational(-a),
            _ => mismatch(),
        }
    }

    pub fn inv(&self, x: &Scalar) -> Result<Scalar> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, x) {
            // Fermat: a^(p-2) = a^(-1).
            (Field::Prime(p), Scalar::Residue(a)) => {
                Scalar::Residue(pow_mod(*a as u64, *p as u64 - 2, *p as u64) as u32)
            }
            (Field::Rational, Scalar::Rational(a)) => Scalar::Rational(a.recip()),
            _ => mismatch(),
        })
    }

    pub fn div(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &Scalar, k: u64) -> Scalar {
        match (self, x) {
            (Field::Prime(p), Scalar::Residue(a)) => Scalar::Residue(pow_mod(*a as u64, k, *p as u64) as u32),
            (Field::Rational, Scalar::Rational(_)) => {
                let mut acc = self.one();
                let mut base = x.clone();
                let mut e = k;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(&acc, &base);
                    }
                    base = self.mul(&base, &base);
                    e >>= 1;
                }
                acc
            }
            _ => mismatch(),
        }
    }

    /// Checked arithmetic: validates membership of every operand first.
    ///
    /// Unary operations ignore `y`.
    pub fn arith(&self, x: &Scalar, y: &Scalar, op: Op) -> Result<Scalar> {
        if !self.contains(x) {
            return Err(Error::FieldMismatch);
        }
        let binary = matches!(op, Op::Add | Op::Sub | Op::Mul | Op::Div);
        if binary && !self.contains(y) {
            return Err(Error::FieldMismatch);
        }
        match op {
            Op::Add => Ok(self.add(x, y)),
            Op::Sub => Ok(self.sub(x, y)),
            Op::Mul => Ok(self.mul(x, y)),
            Op::Div => self.div(x, y),
            Op::Neg => Ok(self.neg(x)),
            Op::Inv => self.inv(x),
            Op::Pow(k) => Ok(self.pow(x, k)),
        }
    }

    /// Whether `x` has a square root in the field.
    pub fn is_square(&self, x: &Scalar) -> bool {
        match (self, x) {
            (Field::Prime(2), _) => true,
            (Field::Prime(p), Scalar::Residue(a)) => {
                *a == 0 || pow_mod(*a as u64, (*p as u64 - 1) / 2, *p as u64) == 1
            }
            (Field::Rational, Scalar::Rational(q)) => {
                !q.is_negative() && perfect_sqrt(q.numer()).is_some() && perfect_sqrt(q.denom()).is_some()
            }
            _ => mismatch(),
        }
    }

    /// A square root of `x` if one exists.
    ///
    /// The result is deterministic: over `GF(p)` the smaller residue of the
    /// pair `{r, -r}`, over the rationals the nonnegative root.
    pub fn sqrt(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (Field::Prime(2), Scalar::Residue(a)) => Some(Scalar::Residue(*a)),
            (Field::Prime(p), Scalar::Residue(a)) => {
                let r = tonelli_shanks(*a as u64, *p as u64)?;
                Some(Scalar::Residue(r.min(*p as u64 - r) as u32))
            }
            (Field::Rational, Scalar::Rational(q)) => {
                if q.is_negative() {
                    return None;
                }
                let n = perfect_sqrt(q.numer())?;
                let d = perfect_sqrt(q.denom())?;
                Some(Scalar::Rational(BigRational::new(n, d)))
            }
            _ => mismatch(),
        }
    }

    /// Square root found by scanning every residue; `None` over the rationals.
    ///
    /// Independent of [`Field::sqrt`] and used to cross-check it on small fields.
    pub fn sqrt_by_scan(&self, x: &Scalar) -> Option<Scalar> {
        let Field::Prime(p) = self else { return None };
        let a = x.as_residue()? as u64;
        let p = *p as u64;
        (0..p)
            .find(|&r| r * r % p == a)
            .map(|r| Scalar::Residue(r.min((p - r) % p) as u32))
    }

    /// All elements `0, 1, ..., p-1` in canonical order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Scalar> + Clone> {
        match self {
            Field::Prime(p) => Ok((0..*p).map(Scalar::Residue)),
            Field::Rational => Err(Error::InfiniteField),
        }
    }

    /// The `i`-th element of a finite field in canonical order.
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue((i % *p as u64) as u32),
            Field::Rational => panic!("rationals are not enumerable"),
        }
    }
}

#[cold]
fn mismatch() -> ! {
    panic!("scalar does not belong to the field")
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Tonelli-Shanks for odd `p`. Returns any root, or `None` for non-residues.
fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Nonzero integer divisors of `|n|` (positive only), `n != 0`.
///
/// Trial division; adequate for the entry sizes of desk-scale matrices.
pub(crate) fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = alloc::vec![BigInt::one()];
    for (prime, e) in factors {
        let current = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &prime;
            divs.extend(current.iter().map(|x| x * &power));
        }
    }
    divs.sort();
    divs
}
