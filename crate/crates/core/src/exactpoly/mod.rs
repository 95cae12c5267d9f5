//! Exact multivariate polynomials with rational coefficients.
//!
//! Every symbolic identity in this crate is checked over this ring, so a
//! passing check means a literal zero polynomial and never a small float.

mod linalg;
mod matrix;
mod parse;

pub use linalg::{rational_nullspace, rational_rank};
pub use matrix::PolyMatrix;
pub use parse::parse_polynomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// Ring operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial in `num_vars` variables. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        Self::monomial(num_vars, vec![0; num_vars], c)
    }

    /// The coordinate function `x_i`.
    ///
    /// Panics if `i >= num_vars`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable x{i} out of range");
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        Self::monomial(num_vars, exps, Rational::one())
    }

    pub fn monomial(num_vars: usize, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), num_vars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { num_vars, terms }
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.len(), num_vars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns the value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; the zero polynomial has degree 0 here.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn check_dims(&self, other: &Self) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::DimensionMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_dims(other)?;
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.num_vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.num_vars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                num_vars: self.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, c * int(m[i] as i64));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.num_vars, "point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.num_vars, "point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(m) {
                    t *= x.powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Re-embeds the polynomial into a ring with more variables.
    pub fn extend_vars(&self, num_vars: usize) -> Self {
        assert!(num_vars >= self.num_vars);
        Polynomial {
            num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.clone();
                    e.resize(num_vars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Random sparse polynomial with small integer or half-integer coefficients.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        num_vars: usize,
        max_degree: u32,
        max_terms: usize,
    ) -> Self {
        let nterms = rng.random_range(1..=max_terms.max(1));
        let mut p = Self::zero(num_vars);
        for _ in 0..nterms {
            let mut m = vec![0u32; num_vars];
            if num_vars > 0 {
                let deg = rng.random_range(0..=max_degree);
                for _ in 0..deg {
                    m[rng.random_range(0..num_vars)] += 1;
                }
            }
            let num = rng.random_range(-3i64..=3);
            let den = if rng.random_bool(0.25) { 2 } else { 1 };
            p.add_term(m, rat(num, den));
        }
        p
    }
}

/// Exact ring arithmetic with a dimension check.
pub fn poly_arith(p: &Polynomial, q: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    match op {
        ArithOp::Add => p.checked_add(q),
        ArithOp::Sub => p.checked_sub(q),
        ArithOp::Mul => p.checked_mul(q),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{i}")?;
        } else {
            write!(f, "x{i}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text form: terms by descending lexicographic exponent vector.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let constant = m.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write_monomial(f, m)?;
            } else {
                write!(f, "{abs}*")?;
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.num_vars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x0 + 1", 1);
        let b = p("x0 - 1", 1);
        assert_eq!(poly_arith(&a, &b, ArithOp::Mul).unwrap(), p("x0^2 - 1", 1));
    }

    #[test]
    fn additive_identity() {
        let a = p("3/2*x0^2*x1 - x1 + 7", 2);
        let z = Polynomial::zero(2);
        assert_eq!(poly_arith(&a, &z, ArithOp::Add).unwrap(), a);
    }

    #[test]
    fn rational_coefficients_cancel() {
        let a = p("3/2*x0", 2);
        let b = p("2/3*x1", 2);
        assert_eq!(&a * &b, p("x0*x1", 2));
    }

    #[test]
    fn mismatched_dims_are_rejected() {
        let a = Polynomial::var(1, 0);
        let b = Polynomial::var(2, 1);
        assert_eq!(
            poly_arith(&a, &b, ArithOp::Sub),
            Err(PolyError::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn partials() {
        assert_eq!(p("x0^2*x1", 2).partial(0).unwrap(), p("2*x0*x1", 2));
        assert!(p("x1^3", 2).partial(0).unwrap().is_zero());
        assert_eq!(
            p("3/2*x0^2 + x0*x1", 2).partial(0).unwrap(),
            p("3*x0 + x1", 2)
        );
        assert_eq!(
            p("x0", 1).partial(1),
            Err(PolyError::IndexOutOfRange {
                index: 1,
                num_vars: 1
            })
        );
    }

    #[test]
    fn display_is_canonical() {
        let a = p("1 - x2 + 3/2*x0^2*x1", 3);
        assert_eq!(a.to_string(), "3/2*x0^2*x1 - x2 + 1");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(p("-x0 - 1/2", 1).to_string(), "-x0 - 1/2");
    }

    #[test]
    fn eval_and_constant() {
        let a = p("x0^2 + 2*x1 - 1", 2);
        assert_eq!(a.eval(&[int(3), rat(1, 2)]), int(9));
        assert_eq!(a.eval_f64(&[3.0, 0.5]), 9.0);
        assert_eq!(p("5/3", 2).as_constant(), Some(rat(5, 3)));
        assert_eq!(a.as_constant(), None);
        assert_eq!(a.total_degree(), 2);
    }
}
