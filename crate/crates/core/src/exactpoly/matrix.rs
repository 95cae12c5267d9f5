use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Polynomial, Rational};

/// Dense matrix of polynomials in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, num_vars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            num_vars,
            data: vec![Polynomial::zero(num_vars); rows * cols],
        }
    }

    pub fn identity(n: usize, num_vars: usize) -> Self {
        let mut m = Self::zeros(n, n, num_vars);
        for i in 0..n {
            m[(i, i)] = Polynomial::one(num_vars);
        }
        m
    }

    /// The 1×1 matrix holding `p`.
    pub fn scalar(p: Polynomial) -> Self {
        PolyMatrix {
            rows: 1,
            cols: 1,
            num_vars: p.num_vars(),
            data: vec![p],
        }
    }

    /// Elementary matrix `E_{ij}` (zero-based).
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize, num_vars: usize) -> Self {
        let mut m = Self::zeros(rows, cols, num_vars);
        m[(i, j)] = Polynomial::one(num_vars);
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>, num_vars: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        let data: Vec<Polynomial> = rows.into_iter().flatten().collect();
        assert!(data.iter().all(|p| p.num_vars() == num_vars));
        PolyMatrix {
            rows: r,
            cols: c,
            num_vars,
            data,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        num_vars: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            num_vars,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        self.map(|e| e * p)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }

    /// Product that treats a 1×1 operand as a scalar.
    pub fn act(&self, rhs: &Self) -> Self {
        if self.shape() == (1, 1) && rhs.shape() != (1, 1) {
            return rhs.scale(&self.data[0]);
        }
        if rhs.shape() == (1, 1) && self.shape() != (1, 1) {
            return self.scale(&rhs.data[0]);
        }
        self * rhs
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.num_vars, |i, j| {
            self[(j, i)].clone()
        })
    }

    /// Exact determinant by cofactor expansion (intended for small sizes).
    pub fn determinant(&self) -> Polynomial {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Polynomial::one(self.num_vars);
        }
        if n == 1 {
            return self.data[0].clone();
        }
        let mut acc = Polynomial::zero(self.num_vars);
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let minor = Self::from_fn(n - 1, n - 1, self.num_vars, |r, c| {
                let cc = if c < j { c } else { c + 1 };
                self[(r + 1, cc)].clone()
            });
            let t = &self[(0, j)] * &minor.determinant();
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Polynomial;
    fn index(&self, (i, j): (usize, usize)) -> &Polynomial {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Polynomial {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix shape mismatch");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix shape mismatch");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        PolyMatrix::from_fn(self.rows, rhs.cols, self.num_vars, |i, j| {
            let mut acc = Polynomial::zero(self.num_vars);
            for k in 0..self.cols {
                let (a, b) = (&self[(i, k)], &rhs[(k, j)]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|e| -e)
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}
