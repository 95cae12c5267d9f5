//! Representations of a Lie algebra with exact complex-rational entries and
//! their deformation complex.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{KuranishiError, ScalarField};
use crate::algebroid::AlgebroidSpec;
use crate::exactpoly::Rational;
use crate::tuples::{binomial, combinations, sort_with_sign, tuple_index};

/// Exact complex rational.
pub type CQ = Complex<Rational>;

pub fn cq(re: Rational) -> CQ {
    Complex::new(re, Rational::zero())
}

/// Dense exact matrix over complex rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CQ>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![CQ::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = CQ::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CQ>>) -> Result<Self, KuranishiError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(KuranishiError::Dimension("ragged matrix".into()));
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real matrix from rational rows.
    pub fn from_real(rows: Vec<Vec<Rational>>) -> Result<Self, KuranishiError> {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(cq).collect()).collect())
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = CQ::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im.is_zero())
    }

    pub fn entries(&self) -> &[CQ] {
        &self.data
    }

    pub fn scale(&self, c: &CQ) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Frobenius norm, in floating point.
    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| {
                let re = rational_to_f64(&z.re);
                let im = rational_to_f64(&z.im);
                re * re + im * im
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = CQ::one() / a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p;
                inv[(col, j)] = &inv[(col, j)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let da = &f * &a[(col, j)];
                    let di = &f * &inv[(col, j)];
                    a[(r, j)] = &a[(r, j)] - &da;
                    inv[(r, j)] = &inv[(r, j)] - &di;
                }
            }
        }
        Some(inv)
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = CQ;
    fn index(&self, (i, j): (usize, usize)) -> &CQ {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CQ {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for QMatrix {
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
                let z = &self[(i, j)];
                if z.im.is_zero() {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}+{}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}

/// A representation `ρ` of a Lie algebra (an algebroid over a point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    algebra: AlgebroidSpec,
    dim_v: usize,
    rho: Vec<QMatrix>,
    scalar_field: ScalarField,
    // exact structure constants c^l_{ij}, row-major in (i, j)
    structure: Vec<Vec<Rational>>,
}

impl RepSpec {
    pub fn new(
        algebra: AlgebroidSpec,
        rho: Vec<QMatrix>,
        scalar_field: ScalarField,
    ) -> Result<Self, KuranishiError> {
        if algebra.num_vars() != 0 {
            return Err(KuranishiError::NotLieAlgebra(algebra.num_vars()));
        }
        let r = algebra.rank();
        if rho.len() != r {
            return Err(KuranishiError::Dimension(format!(
                "need {r} matrices, got {}",
                rho.len()
            )));
        }
        let m = rho[0].rows();
        if m == 0 {
            return Err(KuranishiError::Dimension("dim_V must be at least 1".into()));
        }
        if rho.iter().any(|p| p.rows() != m || p.cols() != m) {
            return Err(KuranishiError::Dimension(format!(
                "every ρ(e_i) must be {m}×{m}"
            )));
        }
        if scalar_field == ScalarField::Real && !rho.iter().all(QMatrix::is_real) {
            return Err(KuranishiError::ComplexEntryInRealRep);
        }
        let report = algebra.validate();
        if !report.is_valid() {
            return Err(KuranishiError::InvalidAlgebra(format!(
                "{} Jacobi failure(s)",
                report.jacobi_failures.len()
            )));
        }
        let mut structure = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                structure.push(
                    algebra
                        .structure(i, j)
                        .iter()
                        .map(|p| p.as_constant().expect("constant structure over a point"))
                        .collect(),
                );
            }
        }
        Ok(RepSpec {
            algebra,
            dim_v: m,
            rho,
            scalar_field,
            structure,
        })
    }

    pub fn algebra(&self) -> &AlgebroidSpec {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn rho(&self) -> &[QMatrix] {
        &self.rho
    }

    pub fn scalar_field(&self) -> ScalarField {
        self.scalar_field
    }

    /// Structure constant `c^l_{ij}`.
    pub fn structure_constant(&self, i: usize, j: usize, l: usize) -> &Rational {
        &self.structure[i * self.rank() + j][l]
    }

    /// `ρ(Σ_l c^l_{ij} e_l)`.
    fn rho_of_bracket(&self, i: usize, j: usize) -> QMatrix {
        let mut acc = QMatrix::zeros(self.dim_v, self.dim_v);
        for (l, c) in self.structure[i * self.rank() + j].iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.rho[l].scale(&cq(c.clone()));
            }
        }
        acc
    }

    /// Conjugate representation `g ρ g⁻¹`.
    pub fn conjugate(&self, g: &QMatrix, g_inv: &QMatrix) -> Result<Self, KuranishiError> {
        if g.rows() != self.dim_v || (g * g_inv) != QMatrix::identity(self.dim_v) {
            return Err(KuranishiError::SingularGauge);
        }
        let rho = self.rho.iter().map(|p| &(g * p) * g_inv).collect();
        RepSpec::new(self.algebra.clone(), rho, self.scalar_field)
    }

    /// Dimensions `C(r, k)·m²` of the cochain spaces.
    pub fn cochain_dims(&self) -> Vec<usize> {
        let m2 = self.dim_v * self.dim_v;
        (0..=self.rank()).map(|k| binomial(self.rank(), k) * m2).collect()
    }
}

/// Flatness defect of one pair of generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    /// Frobenius norm of `[ρ_i, ρ_j] − ρ([e_i, e_j])`.
    pub norm: f64,
    #[serde(skip)]
    pub residual: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepValidation {
    pub failures: Vec<PairResidual>,
}

impl RepValidation {
    pub fn is_flat(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `[ρ_i, ρ_j] = ρ([e_i, e_j])` exactly for all `i < j`.
pub fn validate_rep(rep: &RepSpec) -> RepValidation {
    let r = rep.rank();
    let mut failures = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            let residual = &rep.rho[i].commutator(&rep.rho[j]) - &rep.rho_of_bracket(i, j);
            if !residual.is_zero() {
                failures.push(PairResidual {
                    i,
                    j,
                    norm: residual.norm(),
                    residual,
                });
            }
        }
    }
    RepValidation { failures }
}

/// The deformation complex `C⁰ → C¹ → … → C^r` with exact differentials.
///
/// The basis of `C^k` is indexed by `tuple_index(I)·m² + row·m + col`, with
/// `I` running over increasing k-tuples in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationComplex {
    pub cochain_dims: Vec<usize>,
    /// `differentials[k]` maps `C^k → C^{k+1}`.
    pub differentials: Vec<QMatrix>,
}

fn add_block(d: &mut QMatrix, row0: usize, col0: usize, block: &QMatrix, sign: &CQ) {
    for p in 0..block.rows() {
        for q in 0..block.cols() {
            let v = &block[(p, q)];
            if !v.is_zero() {
                d[(row0 + p, col0 + q)] = &d[(row0 + p, col0 + q)] + &(v * sign);
            }
        }
    }
}

/// Matrix of `X ↦ [ρ, X]` on row-major `m²` coordinates.
fn ad_block(rho: &QMatrix) -> QMatrix {
    let m = rho.rows();
    let mut b = QMatrix::zeros(m * m, m * m);
    for p in 0..m {
        for q in 0..m {
            for u in 0..m {
                // ρ_{pu} X_{uq}
                if !rho[(p, u)].is_zero() {
                    b[(p * m + q, u * m + q)] = &b[(p * m + q, u * m + q)] + &rho[(p, u)];
                }
                // − X_{pu} ρ_{uq}
                if !rho[(u, q)].is_zero() {
                    b[(p * m + q, p * m + u)] = &b[(p * m + q, p * m + u)] - &rho[(u, q)];
                }
            }
        }
    }
    b
}

/// Assembles `D_k` and verifies `D_{k+1} D_k = 0` exactly.
pub fn build_complex(rep: &RepSpec) -> Result<DeformationComplex, KuranishiError> {
    let flat = validate_rep(rep);
    if !flat.is_flat() {
        return Err(KuranishiError::NotFlat(
            flat.failures.iter().map(|f| (f.i, f.j, f.norm)).collect(),
        ));
    }
    let r = rep.rank();
    let m = rep.dim_v;
    let m2 = m * m;
    let dims = rep.cochain_dims();
    let ads: Vec<QMatrix> = rep.rho.iter().map(ad_block).collect();
    let id = QMatrix::identity(m2);
    let one = CQ::one();
    let mut differentials = Vec::with_capacity(r);
    for k in 0..r {
        let mut d = QMatrix::zeros(dims[k + 1], dims[k]);
        for tuple in combinations(r, k + 1) {
            let row0 = tuple_index(r, &tuple) * m2;
            for a in 0..=k {
                let mut rest = tuple.clone();
                let i = rest.remove(a);
                let sign = if a % 2 == 0 { one.clone() } else { -one.clone() };
                add_block(&mut d, row0, tuple_index(r, &rest) * m2, &ads[i], &sign);
            }
            for a in 0..=k {
                for b in (a + 1)..=k {
                    let mut rest = tuple.clone();
                    rest.remove(b);
                    rest.remove(a);
                    for l in 0..r {
                        let c = rep.structure_constant(tuple[a], tuple[b], l);
                        if c.is_zero() {
                            continue;
                        }
                        let mut args = vec![l];
                        args.extend_from_slice(&rest);
                        let Some((s, sorted)) = sort_with_sign(&args) else {
                            continue;
                        };
                        let sgn = if (a + b) % 2 == 0 { s } else { -s };
                        let coeff = cq(c * Rational::from_integer(sgn.into()));
                        add_block(&mut d, row0, tuple_index(r, &sorted) * m2, &id, &coeff);
                    }
                }
            }
        }
        differentials.push(d);
    }
    for k in 0..r.saturating_sub(1) {
        if !(&differentials[k + 1] * &differentials[k]).is_zero() {
            return Err(KuranishiError::NotComplex(k));
        }
    }
    Ok(DeformationComplex {
        cochain_dims: dims,
        differentials,
    })
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;
    use crate::algebroid::{construct_example, ExampleKind};
    use crate::exactpoly::int;

    pub fn lie(rank: usize, br: Vec<((usize, usize), Vec<i64>)>) -> AlgebroidSpec {
        construct_example(&ExampleKind::LieAlgebra {
            rank,
            brackets: br
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().map(int).collect()))
                .collect(),
        })
        .unwrap()
    }

    pub fn real(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_real(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    pub fn sl2() -> RepSpec {
        let alg = lie(
            3,
            vec![
                ((0, 1), vec![0, 2, 0]),
                ((0, 2), vec![0, 0, -2]),
                ((1, 2), vec![1, 0, 0]),
            ],
        );
        let rho = vec![real(&[&[1, 0], &[0, -1]]), real(&[&[0, 1], &[0, 0]]), real(&[&[0, 0], &[1, 0]])];
        RepSpec::new(alg, rho, ScalarField::Real).unwrap()
    }

    pub fn abelian_zero(m: usize) -> RepSpec {
        RepSpec::new(lie(2, vec![]), vec![QMatrix::zeros(m, m); 2], ScalarField::Real).unwrap()
    }

    pub fn heisenberg() -> RepSpec {
        RepSpec::new(lie(3, vec![((0, 1), vec![0, 0, 1])]), vec![QMatrix::zeros(1, 1); 3], ScalarField::Real)
            .unwrap()
    }

    pub fn diag12() -> RepSpec {
        RepSpec::new(lie(1, vec![]), vec![real(&[&[1, 0], &[0, 2]])], ScalarField::Real).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::tests_support::*;
    use crate::exactpoly::{int, rational_rank};

    fn real_rank(m: &QMatrix) -> usize {
        let rows: Vec<Vec<Rational>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].re.clone()).collect())
            .collect();
        rational_rank(&rows)
    }

    #[test]
    fn flatness_checks() {
        assert!(validate_rep(&sl2()).is_flat());
        let bad = RepSpec::new(
            lie(2, vec![]),
            vec![QMatrix::unit(2, 0, 0), QMatrix::unit(2, 0, 1)],
            ScalarField::Real,
        )
        .unwrap();
        let v = validate_rep(&bad);
        assert_eq!(v.failures.len(), 1);
        assert_eq!(v.failures[0].residual, QMatrix::unit(2, 0, 1));
        assert!(matches!(build_complex(&bad), Err(KuranishiError::NotFlat(_))));
    }

    #[test]
    fn sl2_complex() {
        let c = build_complex(&sl2()).unwrap();
        assert_eq!(c.cochain_dims, vec![4, 12, 12, 4]);
        assert_eq!(real_rank(&c.differentials[0]), 3);
    }

    #[test]
    fn single_generator() {
        let rho = real(&[&[1, 0], &[0, 2]]);
        let rep = RepSpec::new(lie(1, vec![]), vec![rho.clone()], ScalarField::Real).unwrap();
        let c = build_complex(&rep).unwrap();
        assert_eq!(c.differentials.len(), 1);
        // D₀ E₁₂ = [ρ, E₁₂] = −E₁₂
        let d0 = &c.differentials[0];
        assert_eq!(d0[(1, 1)], cq(int(-1)));
        assert_eq!(d0[(2, 2)], cq(int(1)));
        assert_eq!(real_rank(d0), 2);
    }

    #[test]
    fn zero_rep_has_zero_differentials() {
        let rep = RepSpec::new(lie(2, vec![]), vec![QMatrix::zeros(2, 2); 2], ScalarField::Real).unwrap();
        assert!(build_complex(&rep).unwrap().differentials.iter().all(QMatrix::is_zero));
    }

    #[test]
    fn exact_inverse() {
        let g = real(&[&[2, 1], &[1, 1]]);
        let gi = g.inverse().unwrap();
        assert_eq!(&g * &gi, QMatrix::identity(2));
        assert!(real(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let z = QMatrix::from_rows(vec![vec![Complex::new(int(0), int(1))]]).unwrap();
        assert_eq!(z.inverse().unwrap()[(0, 0)], Complex::new(int(0), int(-1)));
    }

    #[test]
    fn real_field_rejects_complex_entries() {
        let z = QMatrix::from_rows(vec![vec![Complex::new(int(0), int(1))]]).unwrap();
        assert!(matches!(
            RepSpec::new(lie(1, vec![]), vec![z], ScalarField::Real),
            Err(KuranishiError::ComplexEntryInRealRep)
        ));
    }
}
