//! Graded calculus of matrix-valued L-forms.
//!
//! A k-form is stored by its values on strictly increasing k-tuples of basis
//! sections. Wedge products are shuffle sums, so `e⁰* ∧ e¹*` has component 1
//! on `(0, 1)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebroid::{AlgebroidSpec, SectionExpr};
use crate::exactpoly::{PolyMatrix, Polynomial};
use crate::tuples::{combinations, sort_with_sign};

mod connection;
mod suite;

pub use connection::{
    bianchi_check, covariant_d, curvature, gauge_transform, reference_is_flat, ConnectionForm,
    GaugeMap, ValuedIn,
};
pub use suite::{
    cartan_identity_suite, connection_identity_suite, random_form, random_gauge_map,
    random_section, IdentityOutcome, SuiteReport, CARTAN_IDENTITIES, CONNECTION_IDENTITIES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("value shapes {left:?} and {right:?} are incompatible")]
    Shape {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("connection form must have degree 1, got {0}")]
    NotDegreeOne(usize),
    #[error("gauge map inverse check failed: {0}")]
    NotInverse(String),
}

/// An L-form of fixed degree with `rows × cols` polynomial-matrix values.
#[derive(Clone, PartialEq, Eq)]
pub struct LForm {
    degree: usize,
    rank: usize,
    num_vars: usize,
    shape: (usize, usize),
    // only nonzero components on increasing tuples
    components: BTreeMap<Vec<usize>, PolyMatrix>,
}

impl LForm {
    pub fn zero(rank: usize, num_vars: usize, degree: usize, shape: (usize, usize)) -> Self {
        LForm {
            degree,
            rank,
            num_vars,
            shape,
            components: BTreeMap::new(),
        }
    }

    /// Builds a form from `(tuple, value)` pairs; tuples may be unordered and
    /// are normalized with the permutation sign. Repeated tuples are summed.
    pub fn from_components(
        rank: usize,
        num_vars: usize,
        degree: usize,
        shape: (usize, usize),
        comps: impl IntoIterator<Item = (Vec<usize>, PolyMatrix)>,
    ) -> Result<Self, CartanError> {
        let mut form = Self::zero(rank, num_vars, degree, shape);
        for (tuple, value) in comps {
            if tuple.len() != degree || tuple.iter().any(|&i| i >= rank) {
                return Err(CartanError::Dimension(format!(
                    "tuple {tuple:?} invalid for a degree-{degree} form of rank {rank}"
                )));
            }
            if value.shape() != shape || value.num_vars() != num_vars {
                return Err(CartanError::Dimension(format!(
                    "component {tuple:?} has shape {:?}, expected {shape:?}",
                    value.shape()
                )));
            }
            let Some((sign, sorted)) = sort_with_sign(&tuple) else {
                continue;
            };
            let value = if sign < 0 { -&value } else { value };
            form.accumulate(sorted, &value);
        }
        Ok(form)
    }

    /// Degree-0 form with the given value.
    pub fn function(rank: usize, value: PolyMatrix) -> Self {
        let mut f = Self::zero(rank, value.num_vars(), 0, value.shape());
        f.accumulate(Vec::new(), &value);
        f
    }

    /// Scalar degree-0 form.
    pub fn scalar_function(rank: usize, f: Polynomial) -> Self {
        Self::function(rank, PolyMatrix::scalar(f))
    }

    /// The dual basis covector `eⁱ*`.
    pub fn covector(rank: usize, num_vars: usize, i: usize) -> Self {
        let mut f = Self::zero(rank, num_vars, 1, (1, 1));
        f.accumulate(vec![i], &PolyMatrix::scalar(Polynomial::one(num_vars)));
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Nonzero components keyed by increasing tuple.
    pub fn components(&self) -> &BTreeMap<Vec<usize>, PolyMatrix> {
        &self.components
    }

    /// Component on an increasing tuple (zero when absent).
    pub fn component(&self, tuple: &[usize]) -> PolyMatrix {
        self.components
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.shape.0, self.shape.1, self.num_vars))
    }

    /// Value on an arbitrary tuple of basis indices, with antisymmetry.
    pub fn eval_basis(&self, tuple: &[usize]) -> Option<PolyMatrix> {
        debug_assert_eq!(tuple.len(), self.degree);
        let (sign, sorted) = sort_with_sign(tuple)?;
        let v = self.components.get(&sorted)?;
        Some(if sign < 0 { -v } else { v.clone() })
    }

    /// Value on sections `ω(ξ₁, …, ξ_k)`, expanded multilinearly.
    pub fn eval_sections(&self, sections: &[SectionExpr]) -> PolyMatrix {
        assert_eq!(sections.len(), self.degree, "wrong number of sections");
        let mut acc = PolyMatrix::zeros(self.shape.0, self.shape.1, self.num_vars);
        for (tuple, value) in &self.components {
            // Σ over permutations σ of sign(σ) Π ξ_a[tuple[σ(a)]]
            for perm in permutations(self.degree) {
                let mut coeff = Polynomial::one(self.num_vars);
                for (a, &p) in perm.0.iter().enumerate() {
                    coeff = &coeff * &sections[a].components[tuple[p]];
                    if coeff.is_zero() {
                        break;
                    }
                }
                if coeff.is_zero() {
                    continue;
                }
                let term = value.scale(&coeff);
                acc = if perm.1 > 0 { &acc + &term } else { &acc - &term };
            }
        }
        acc
    }

    fn accumulate(&mut self, tuple: Vec<usize>, value: &PolyMatrix) {
        if value.is_zero() {
            return;
        }
        match self.components.get_mut(&tuple) {
            Some(existing) => {
                let sum = &*existing + value;
                if sum.is_zero() {
                    self.components.remove(&tuple);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.components.insert(tuple, value.clone());
            }
        }
    }

    fn map_values(&self, f: impl Fn(&PolyMatrix) -> PolyMatrix, shape: (usize, usize)) -> Self {
        let mut out = Self::zero(self.rank, self.num_vars, self.degree, shape);
        for (t, v) in &self.components {
            out.accumulate(t.clone(), &f(v));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| -v, self.shape)
    }

    /// Multiplies every component by a function.
    pub fn scale(&self, f: &Polynomial) -> Self {
        self.map_values(|v| v.scale(f), self.shape)
    }

    /// Sum of two forms. Zero forms of any degree are identified with each
    /// other, so a zero summand never causes a degree mismatch.
    pub fn add(&self, other: &Self) -> Result<Self, CartanError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CartanError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self, CartanError> {
        if other.is_zero() && (other.degree != self.degree || other.shape != self.shape) {
            return Ok(self.clone());
        }
        if self.is_zero() && (other.degree != self.degree || other.shape != self.shape) {
            return Ok(if subtract { other.neg() } else { other.clone() });
        }
        if self.degree != other.degree || self.shape != other.shape || self.rank != other.rank {
            return Err(CartanError::Dimension(format!(
                "cannot add a degree-{} {:?} form to a degree-{} {:?} form",
                self.degree, self.shape, other.degree, other.shape
            )));
        }
        let mut out = self.clone();
        for (t, v) in &other.components {
            if subtract {
                out.accumulate(t.clone(), &-v);
            } else {
                out.accumulate(t.clone(), v);
            }
        }
        Ok(out)
    }

    /// Applies `f` to each component (e.g. conjugation); shape is inferred.
    pub fn map_components(&self, f: impl Fn(&PolyMatrix) -> PolyMatrix) -> Self {
        let probe = f(&PolyMatrix::zeros(self.shape.0, self.shape.1, self.num_vars));
        self.map_values(f, probe.shape())
    }
}

impl std::fmt::Debug for LForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LForm(deg {}, {:?}) {{", self.degree, self.shape)?;
        for (i, (t, v)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {t:?}: {v:?}")?;
        }
        write!(f, " }}")
    }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i32)>) {
        let k = used.len();
        if prefix.len() == k {
            let sign = sort_with_sign(prefix).map_or(0, |(s, _)| s);
            out.push((prefix.clone(), sign));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn product_shape(
    left: (usize, usize),
    right: (usize, usize),
) -> Result<(usize, usize), CartanError> {
    if left == (1, 1) {
        Ok(right)
    } else if right == (1, 1) {
        Ok(left)
    } else if left.1 == right.0 {
        Ok((left.0, right.1))
    } else {
        Err(CartanError::Shape { left, right })
    }
}

fn check_same_space(a: &LForm, b: &LForm) -> Result<(), CartanError> {
    if a.rank != b.rank || a.num_vars != b.num_vars {
        return Err(CartanError::Dimension(format!(
            "forms live on different algebroids (rank {} / {} vars vs rank {} / {} vars)",
            a.rank, a.num_vars, b.rank, b.num_vars
        )));
    }
    Ok(())
}

/// Wedge product; values multiply as matrices (1×1 values act as scalars).
pub fn wedge(omega: &LForm, tau: &LForm) -> Result<LForm, CartanError> {
    check_same_space(omega, tau)?;
    let shape = product_shape(omega.shape, tau.shape)?;
    let (p, q) = (omega.degree, tau.degree);
    let mut out = LForm::zero(omega.rank, omega.num_vars, p + q, shape);
    if p + q > omega.rank {
        return Ok(out);
    }
    for (s, a) in &omega.components {
        for (t, b) in &tau.components {
            if s.iter().any(|i| t.contains(i)) {
                continue;
            }
            let mut joined = s.clone();
            joined.extend_from_slice(t);
            let (sign, sorted) = sort_with_sign(&joined).expect("disjoint tuples");
            let prod = a.act(b);
            out.accumulate(sorted, &if sign < 0 { -&prod } else { prod });
        }
    }
    Ok(out)
}

/// `[ω, τ] = ω∧τ − (−1)^{pq} τ∧ω` for square matrix values.
pub fn graded_bracket(omega: &LForm, tau: &LForm) -> Result<LForm, CartanError> {
    if omega.shape != tau.shape || omega.shape.0 != omega.shape.1 {
        return Err(CartanError::Shape {
            left: omega.shape,
            right: tau.shape,
        });
    }
    let ab = wedge(omega, tau)?;
    let ba = wedge(tau, omega)?;
    if (omega.degree * tau.degree).is_multiple_of(2) {
        ab.sub(&ba)
    } else {
        ab.add(&ba)
    }
}

/// The algebroid differential, applied entrywise to matrix values.
pub fn d_l(spec: &AlgebroidSpec, omega: &LForm) -> LForm {
    assert_eq!(omega.rank, spec.rank(), "form rank differs from algebroid rank");
    let k = omega.degree;
    let mut out = LForm::zero(omega.rank, omega.num_vars, k + 1, omega.shape);
    if k + 1 > omega.rank || omega.is_zero() {
        return out;
    }
    for tuple in combinations(omega.rank, k + 1) {
        let mut acc = PolyMatrix::zeros(omega.shape.0, omega.shape.1, omega.num_vars);
        for a in 0..=k {
            let mut rest = tuple.clone();
            let i = rest.remove(a);
            if let Some(v) = omega.components.get(&rest) {
                let t = spec.anchor_basis_apply_matrix(i, v);
                acc = if a % 2 == 0 { &acc + &t } else { &acc - &t };
            }
        }
        for a in 0..=k {
            for b in (a + 1)..=k {
                let c = spec.structure(tuple[a], tuple[b]);
                let mut rest: Vec<usize> = tuple.clone();
                rest.remove(b);
                rest.remove(a);
                for (l, cl) in c.iter().enumerate() {
                    if cl.is_zero() {
                        continue;
                    }
                    let mut args = Vec::with_capacity(k);
                    args.push(l);
                    args.extend_from_slice(&rest);
                    if let Some(v) = omega.eval_basis(&args) {
                        let t = v.scale(cl);
                        acc = if (a + b) % 2 == 0 { &acc + &t } else { &acc - &t };
                    }
                }
            }
        }
        out.accumulate(tuple, &acc);
    }
    out
}

/// Insertion `i_ξ ω`; a degree-0 input gives the zero form.
pub fn insert(xi: &SectionExpr, omega: &LForm) -> Result<LForm, CartanError> {
    if xi.rank() != omega.rank {
        return Err(CartanError::Dimension(format!(
            "section of rank {} inserted into a rank-{} form",
            xi.rank(),
            omega.rank
        )));
    }
    if omega.degree == 0 {
        return Ok(LForm::zero(omega.rank, omega.num_vars, 0, omega.shape));
    }
    let mut out = LForm::zero(omega.rank, omega.num_vars, omega.degree - 1, omega.shape);
    for (tuple, v) in &omega.components {
        for (pos, &l) in tuple.iter().enumerate() {
            let c = &xi.components[l];
            if c.is_zero() {
                continue;
            }
            let mut rest = tuple.clone();
            rest.remove(pos);
            let t = v.scale(c);
            out.accumulate(rest, &if pos % 2 == 0 { t } else { -&t });
        }
    }
    Ok(out)
}

/// Lie derivative `𝓛_ξ ω`.
pub fn lie_derivative(
    spec: &AlgebroidSpec,
    xi: &SectionExpr,
    omega: &LForm,
) -> Result<LForm, CartanError> {
    if xi.rank() != omega.rank || omega.rank != spec.rank() {
        return Err(CartanError::Dimension("section rank".into()));
    }
    let k = omega.degree;
    let mut out = LForm::zero(omega.rank, omega.num_vars, k, omega.shape);
    if omega.is_zero() {
        return Ok(out);
    }
    let brackets: Vec<SectionExpr> = (0..omega.rank)
        .map(|j| {
            let ej = SectionExpr::basis(omega.rank, omega.num_vars, j);
            spec.section_bracket_unchecked(xi, &ej)
        })
        .collect();
    for tuple in combinations(omega.rank, k) {
        let mut acc = match omega.components.get(&tuple) {
            Some(v) => v.map(|p| spec.anchor_apply_unchecked(xi, p)),
            None => PolyMatrix::zeros(omega.shape.0, omega.shape.1, omega.num_vars),
        };
        for a in 0..k {
            for (l, c) in brackets[tuple[a]].components.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut args = tuple.clone();
                args[a] = l;
                if let Some(v) = omega.eval_basis(&args) {
                    acc = &acc - &v.scale(c);
                }
            }
        }
        out.accumulate(tuple, &acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{construct_example, ExampleKind};
    use crate::exactpoly::{int, parse_polynomial};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    fn lie_algebra(rank: usize, brackets: Vec<((usize, usize), Vec<i64>)>) -> AlgebroidSpec {
        construct_example(&ExampleKind::LieAlgebra {
            rank,
            brackets: brackets
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().map(int).collect()))
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn basis_wedge() {
        let w = wedge(&LForm::covector(2, 0, 0), &LForm::covector(2, 0, 1)).unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(w.component(&[0, 1]), PolyMatrix::scalar(Polynomial::one(0)));
        let back = wedge(&LForm::covector(2, 0, 1), &LForm::covector(2, 0, 0)).unwrap();
        assert_eq!(back, w.neg());
    }

    #[test]
    fn odd_scalar_form_squares_to_zero() {
        let w = LForm::covector(3, 1, 0)
            .scale(&p("x0", 1))
            .add(&LForm::covector(3, 1, 2))
            .unwrap();
        assert!(wedge(&w, &w).unwrap().is_zero());
    }

    #[test]
    fn wedge_beyond_rank_is_zero() {
        let a = LForm::covector(1, 0, 0);
        let w = wedge(&a, &a).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 2);
    }

    fn offdiag_connection() -> LForm {
        LForm::from_components(
            2,
            0,
            1,
            (2, 2),
            [
                (vec![0], PolyMatrix::unit(2, 2, 0, 1, 0)),
                (vec![1], PolyMatrix::unit(2, 2, 1, 0, 0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn matrix_wedge_and_bracket() {
        let a = offdiag_connection();
        let diag = &PolyMatrix::unit(2, 2, 0, 0, 0) - &PolyMatrix::unit(2, 2, 1, 1, 0);
        let aa = wedge(&a, &a).unwrap();
        assert_eq!(aa.component(&[0, 1]), diag);
        let br = graded_bracket(&a, &a).unwrap();
        assert_eq!(br.component(&[0, 1]), diag.scale_rational(&int(2)));
    }

    #[test]
    fn degree_zero_bracket_is_commutator() {
        let g = LForm::function(2, PolyMatrix::unit(2, 2, 0, 1, 0));
        let a = offdiag_connection();
        let br = graded_bracket(&g, &a).unwrap();
        let expected = a.map_components(|v| PolyMatrix::unit(2, 2, 0, 1, 0).commutator(v));
        assert_eq!(br, expected);
    }

    #[test]
    fn d_of_function_on_tangent_line() {
        let spec = construct_example(&ExampleKind::Tangent { num_vars: 1 }).unwrap();
        let f = LForm::scalar_function(1, p("x0^2", 1));
        let df = d_l(&spec, &f);
        assert_eq!(df.component(&[0]), PolyMatrix::scalar(p("2*x0", 1)));
    }

    #[test]
    fn d_of_covector_on_so3() {
        let spec = lie_algebra(
            3,
            vec![
                ((0, 1), vec![0, 0, 1]),
                ((0, 2), vec![0, -1, 0]),
                ((1, 2), vec![1, 0, 0]),
            ],
        );
        let d = d_l(&spec, &LForm::covector(3, 0, 0));
        let mut expected = LForm::zero(3, 0, 2, (1, 1));
        expected.accumulate(vec![1, 2], &PolyMatrix::scalar(p("-1", 0)));
        assert_eq!(d, expected);
        assert!(d_l(&spec, &d).is_zero());
    }

    #[test]
    fn insertion_examples() {
        let w = wedge(&LForm::covector(2, 1, 0), &LForm::covector(2, 1, 1)).unwrap();
        let e0 = SectionExpr::basis(2, 1, 0);
        assert_eq!(insert(&e0, &w).unwrap(), LForm::covector(2, 1, 1));
        let xe0 = e0.scale(&p("x0", 1));
        let r = insert(&xe0, &LForm::covector(2, 1, 0)).unwrap();
        assert_eq!(r, LForm::scalar_function(2, p("x0", 1)));
        let f = LForm::scalar_function(2, p("x0", 1));
        assert!(insert(&e0, &f).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_of_function_is_anchor() {
        let spec = construct_example(&ExampleKind::Poisson {
            num_vars: 2,
            bivector: vec![((0, 1), p("x0", 2))],
        })
        .unwrap();
        let xi = SectionExpr::new(vec![p("x1", 2), p("1 + x0", 2)]);
        let f = p("x0^2*x1", 2);
        let l = lie_derivative(&spec, &xi, &LForm::scalar_function(2, f.clone())).unwrap();
        let expected = spec.anchor_apply(&xi, &f).unwrap();
        assert_eq!(l, LForm::scalar_function(2, expected));
    }

    #[test]
    fn lie_derivative_abelian_constant_vanishes() {
        let spec = lie_algebra(2, vec![]);
        let xi = SectionExpr::new(vec![p("2", 0), p("-1", 0)]);
        let w = LForm::covector(2, 0, 0).add(&LForm::covector(2, 0, 1)).unwrap();
        assert!(lie_derivative(&spec, &xi, &w).unwrap().is_zero());
    }

    #[test]
    fn eval_sections_matches_basis() {
        let w = wedge(&LForm::covector(3, 1, 0), &LForm::covector(3, 1, 2))
            .unwrap()
            .scale(&p("x0", 1));
        let e = |i| SectionExpr::basis(3, 1, i);
        assert_eq!(w.eval_sections(&[e(2), e(0)]), w.eval_basis(&[2, 0]).unwrap());
        let xi = SectionExpr::new(vec![p("1", 1), p("0", 1), p("x0", 1)]);
        // (e0*∧e2*)(ξ, e0) = ξ_0·0 − ξ_2·1
        assert_eq!(
            w.eval_sections(&[xi, e(0)]),
            PolyMatrix::scalar(p("-x0^2", 1))
        );
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = LForm::function(2, PolyMatrix::zeros(2, 1, 0));
        let b = LForm::function(2, PolyMatrix::zeros(2, 1, 0));
        assert!(matches!(wedge(&a, &b), Err(CartanError::Shape { .. })));
    }
}
