//! Polynomial Lie algebroids over ℝⁿ.
//!
//! A rank-`r` algebroid is stored through its anchor matrix (row `i` is the
//! vector field `a(e_i)`) and its structure functions `c^k_{ij}` for `i < j`.
//! With `num_vars == 0` the base is a point and the data is a Lie algebra.

mod constructions;

pub use constructions::{construct_example, ExampleKind};

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactpoly::{
    rational_nullspace, rational_rank, PolyMatrix, Polynomial, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebroidError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("bracket pair ({i}, {j}) must satisfy i < j < rank")]
    BadPair { i: usize, j: usize },
    #[error("construction rejected: {reason}")]
    Rejected {
        reason: String,
        residual: Vec<Polynomial>,
    },
}

/// A section `Σ f_i e_i` of the algebroid.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SectionExpr {
    pub components: Vec<Polynomial>,
}

impl SectionExpr {
    pub fn new(components: Vec<Polynomial>) -> Self {
        SectionExpr { components }
    }

    pub fn zero(rank: usize, num_vars: usize) -> Self {
        SectionExpr {
            components: vec![Polynomial::zero(num_vars); rank],
        }
    }

    /// The basis section `e_i`.
    pub fn basis(rank: usize, num_vars: usize, i: usize) -> Self {
        let mut s = Self::zero(rank, num_vars);
        s.components[i] = Polynomial::one(num_vars);
        s
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, f: &Polynomial) -> Self {
        SectionExpr {
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SectionExpr {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SectionExpr {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Anchor + structure functions of a polynomial Lie algebroid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebroidSpec {
    num_vars: usize,
    rank: usize,
    anchor: Vec<Vec<Polynomial>>,
    bracket: BTreeMap<(usize, usize), Vec<Polynomial>>,
    // c^k_{ij} for every ordered pair, row-major in (i, j)
    structure: Vec<Vec<Polynomial>>,
}

impl AlgebroidSpec {
    /// Builds a spec; bracket pairs must be `i < j`, omitted pairs are zero.
    pub fn new(
        num_vars: usize,
        rank: usize,
        anchor: Vec<Vec<Polynomial>>,
        brackets: impl IntoIterator<Item = ((usize, usize), Vec<Polynomial>)>,
    ) -> Result<Self, AlgebroidError> {
        if rank == 0 {
            return Err(AlgebroidError::ZeroRank);
        }
        if anchor.len() != rank || anchor.iter().any(|row| row.len() != num_vars) {
            return Err(AlgebroidError::Dimension(format!(
                "anchor must be {rank}×{num_vars}"
            )));
        }
        let all_polys_ok = |ps: &[Polynomial]| ps.iter().all(|p| p.num_vars() == num_vars);
        if !anchor.iter().all(|row| all_polys_ok(row)) {
            return Err(AlgebroidError::Dimension(
                "anchor entries must use the base variables".into(),
            ));
        }
        let mut bracket = BTreeMap::new();
        for ((i, j), coeffs) in brackets {
            if i >= j || j >= rank {
                return Err(AlgebroidError::BadPair { i, j });
            }
            if coeffs.len() != rank || !all_polys_ok(&coeffs) {
                return Err(AlgebroidError::Dimension(format!(
                    "bracket ({i}, {j}) needs {rank} coefficients in {num_vars} variables"
                )));
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                bracket.insert((i, j), coeffs);
            }
        }
        let zero = vec![Polynomial::zero(num_vars); rank];
        let mut structure = vec![zero.clone(); rank * rank];
        for (&(i, j), c) in &bracket {
            structure[i * rank + j] = c.clone();
            structure[j * rank + i] = c.iter().map(|p| -p).collect();
        }
        Ok(AlgebroidSpec {
            num_vars,
            rank,
            anchor,
            bracket,
            structure,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn anchor(&self) -> &[Vec<Polynomial>] {
        &self.anchor
    }

    /// Stored brackets `(i, j) -> c^·_{ij}` with `i < j`.
    pub fn brackets(&self) -> &BTreeMap<(usize, usize), Vec<Polynomial>> {
        &self.bracket
    }

    /// `c^·_{ij}` for any ordered pair (antisymmetric, zero on the diagonal).
    pub fn structure(&self, i: usize, j: usize) -> &[Polynomial] {
        &self.structure[i * self.rank + j]
    }

    /// Applies the vector field `a(e_i)` to `f`.
    pub fn anchor_basis_apply(&self, i: usize, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.num_vars);
        for (j, coeff) in self.anchor[i].iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let d = f.partial(j).expect("partial index within base");
            if !d.is_zero() {
                acc = &acc + &(coeff * &d);
            }
        }
        acc
    }

    /// Entrywise `a(e_i)` on a matrix of polynomials.
    pub fn anchor_basis_apply_matrix(&self, i: usize, m: &PolyMatrix) -> PolyMatrix {
        m.map(|p| self.anchor_basis_apply(i, p))
    }

    fn check_section(&self, xi: &SectionExpr) -> Result<(), AlgebroidError> {
        if xi.rank() != self.rank || xi.components.iter().any(|c| c.num_vars() != self.num_vars) {
            return Err(AlgebroidError::Dimension(format!(
                "section must have {} components in {} variables",
                self.rank, self.num_vars
            )));
        }
        Ok(())
    }

    /// `a(ξ) f = Σ_i ξ_i Σ_j anchor[i][j] ∂f/∂x_j`.
    pub fn anchor_apply(&self, xi: &SectionExpr, f: &Polynomial) -> Result<Polynomial, AlgebroidError> {
        self.check_section(xi)?;
        if f.num_vars() != self.num_vars {
            return Err(AlgebroidError::Dimension("function variables".into()));
        }
        Ok(self.anchor_apply_unchecked(xi, f))
    }

    pub(crate) fn anchor_apply_unchecked(&self, xi: &SectionExpr, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.num_vars);
        for (i, c) in xi.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = self.anchor_basis_apply(i, f);
            if !t.is_zero() {
                acc = &acc + &(c * &t);
            }
        }
        acc
    }

    /// The vector field `a(ξ)` as its coefficient vector.
    pub fn anchor_field(&self, xi: &SectionExpr) -> Vec<Polynomial> {
        (0..self.num_vars)
            .map(|l| {
                let mut acc = Polynomial::zero(self.num_vars);
                for (i, c) in xi.components.iter().enumerate() {
                    acc = &acc + &(c * &self.anchor[i][l]);
                }
                acc
            })
            .collect()
    }

    /// Leibniz-extended bracket of two sections.
    pub fn section_bracket(
        &self,
        xi: &SectionExpr,
        eta: &SectionExpr,
    ) -> Result<SectionExpr, AlgebroidError> {
        self.check_section(xi)?;
        self.check_section(eta)?;
        Ok(self.section_bracket_unchecked(xi, eta))
    }

    pub(crate) fn section_bracket_unchecked(&self, xi: &SectionExpr, eta: &SectionExpr) -> SectionExpr {
        let r = self.rank;
        let mut out = SectionExpr::zero(r, self.num_vars);
        for i in 0..r {
            let f = &xi.components[i];
            if f.is_zero() {
                continue;
            }
            for j in 0..r {
                let g = &eta.components[j];
                if g.is_zero() || i == j {
                    continue;
                }
                let fg = f * g;
                for (k, c) in self.structure(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out.components[k] = &out.components[k] + &(&fg * c);
                    }
                }
            }
        }
        for j in 0..r {
            let t = self.anchor_apply_unchecked(xi, &eta.components[j]);
            if !t.is_zero() {
                out.components[j] = &out.components[j] + &t;
            }
        }
        for i in 0..r {
            let t = self.anchor_apply_unchecked(eta, &xi.components[i]);
            if !t.is_zero() {
                out.components[i] = &out.components[i] - &t;
            }
        }
        out
    }

    /// Checks the anchor morphism and Jacobi conditions exactly.
    pub fn validate(&self) -> ValidationReport {
        let r = self.rank;
        let n = self.num_vars;
        let mut report = ValidationReport::default();
        for i in 0..r {
            for j in (i + 1)..r {
                let residual: Vec<Polynomial> = (0..n)
                    .map(|l| {
                        let mut lhs = Polynomial::zero(n);
                        for (k, c) in self.structure(i, j).iter().enumerate() {
                            lhs = &lhs + &(c * &self.anchor[k][l]);
                        }
                        let rhs = &self.anchor_basis_apply(i, &self.anchor[j][l])
                            - &self.anchor_basis_apply(j, &self.anchor[i][l]);
                        &lhs - &rhs
                    })
                    .collect();
                if residual.iter().any(|p| !p.is_zero()) {
                    report.anchor_failures.push(AnchorFailure { i, j, residual });
                }
            }
        }
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let residual = self.jacobiator(i, j, k);
                    if residual.iter().any(|p| !p.is_zero()) {
                        report.jacobi_failures.push(JacobiFailure {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        report
    }

    /// Components of `Σ_cyclic [e_i, [e_j, e_k]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Polynomial> {
        let r = self.rank;
        let mut out = vec![Polynomial::zero(self.num_vars); r];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let inner = self.structure(b, c);
            for (m, slot) in out.iter_mut().enumerate() {
                let mut acc = self.anchor_basis_apply(a, &inner[m]);
                for (l, cl) in inner.iter().enumerate() {
                    let outer = &self.structure(a, l)[m];
                    if !cl.is_zero() && !outer.is_zero() {
                        acc = &acc + &(cl * outer);
                    }
                }
                *slot = &*slot + &acc;
            }
        }
        out
    }

    /// Pointwise rank test of the anchor (surjectivity onto the tangent space).
    pub fn ellipticity_check(&self, sample_points: &[Vec<Rational>], seed: u64) -> EllipticityReport {
        let n = self.num_vars;
        if n == 0 {
            return EllipticityReport {
                elliptic_at_samples: true,
                witness: None,
                points_checked: 0,
                constant_minor: Some(Vec::new()),
            };
        }
        let mut points = sample_points.to_vec();
        if points.is_empty() {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..16 {
                points.push(
                    (0..n)
                        .map(|_| crate::exactpoly::rat(rng.random_range(-8..=8), rng.random_range(1..=4)))
                        .collect(),
                );
            }
        }
        let mut witness = None;
        for p in &points {
            assert_eq!(p.len(), n, "sample point dimension");
            let rows: Vec<Vec<Rational>> = self
                .anchor
                .iter()
                .map(|row| row.iter().map(|a| a.eval(p)).collect())
                .collect();
            if rational_rank(&rows) < n {
                witness = Some(p.clone());
                break;
            }
        }
        EllipticityReport {
            elliptic_at_samples: witness.is_none(),
            witness,
            points_checked: points.len(),
            constant_minor: self.constant_minor(),
        }
    }

    /// Rows of an n×n anchor minor whose determinant is a nonzero constant,
    /// which certifies surjectivity of the anchor everywhere.
    pub fn constant_minor(&self) -> Option<Vec<usize>> {
        let n = self.num_vars;
        if n > self.rank {
            return None;
        }
        let mut rows: Vec<usize> = (0..n).collect();
        loop {
            let m = PolyMatrix::from_fn(n, n, n, |a, b| self.anchor[rows[a]][b].clone());
            if let Some(c) = m.determinant().as_constant() {
                if !num_traits::Zero::is_zero(&c) {
                    return Some(rows);
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                if rows[k] < self.rank - n + k {
                    rows[k] += 1;
                    for t in (k + 1)..n {
                        rows[t] = rows[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Basis of `{f : deg f ≤ d, a(e_i) f = 0 for all i}`.
    pub fn kernel_of_dl(&self, max_degree: u32) -> Vec<Polynomial> {
        let n = self.num_vars;
        let monomials = monomials_up_to(n, max_degree);
        let mut rows_by_key: BTreeMap<(usize, Vec<u32>), Vec<Rational>> = BTreeMap::new();
        let cols = monomials.len();
        for (c, m) in monomials.iter().enumerate() {
            let f = Polynomial::monomial(n, m.clone(), crate::exactpoly::int(1));
            for i in 0..self.rank {
                for (key, coeff) in self.anchor_basis_apply(i, &f).terms() {
                    rows_by_key
                        .entry((i, key.clone()))
                        .or_insert_with(|| vec![num_traits::Zero::zero(); cols])[c] = coeff.clone();
                }
            }
        }
        let rows: Vec<Vec<Rational>> = rows_by_key.into_values().collect();
        rational_nullspace(&rows, cols)
            .into_iter()
            .map(|v| {
                Polynomial::from_terms(n, monomials.iter().cloned().zip(v))
            })
            .collect()
    }
}

fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorFailure {
    pub i: usize,
    pub j: usize,
    /// `a([e_i, e_j]) − [a(e_i), a(e_j)]` as a vector field.
    pub residual: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    /// Jacobiator as a section.
    pub residual: Vec<Polynomial>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub anchor_failures: Vec<AnchorFailure>,
    pub jacobi_failures: Vec<JacobiFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.anchor_failures.is_empty() && self.jacobi_failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticityReport {
    pub elliptic_at_samples: bool,
    pub witness: Option<Vec<Rational>>,
    pub points_checked: usize,
    /// Exact certificate, when one exists.
    pub constant_minor: Option<Vec<usize>>,
}
