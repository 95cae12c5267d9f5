//! Hodge decomposition of the deformation complex.
//!
//! The basis of each `C^k` is declared orthonormal, so adjoints are conjugate
//! transposes. Harmonic spaces are `ker D_k ∩ ker δ_{k−1}`, computed from a
//! single SVD of the stacked operator.

use nalgebra::{DMatrix, DVector};

use super::rep::{rational_to_f64, DeformationComplex};
use super::Scalar;

#[derive(Clone, Debug)]
pub struct HodgeData<S: Scalar> {
    pub dims: Vec<usize>,
    /// `D_k : C^k → C^{k+1}` for `k < r`.
    pub d: Vec<DMatrix<S>>,
    /// `δ_k = D_k^*`.
    pub delta: Vec<DMatrix<S>>,
    pub laplacians: Vec<DMatrix<S>>,
    pub projectors: Vec<DMatrix<S>>,
    pub green: Vec<DMatrix<S>>,
    /// Orthonormal columns spanning `ℋ^k`.
    pub harmonic_bases: Vec<DMatrix<S>>,
    pub rank_tolerance: f64,
}

/// Residuals of the Hodge identities at one degree.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HodgeResiduals {
    /// `‖x − Hx − ΔGx‖`
    pub green_left: f64,
    /// `‖x − Hx − GΔx‖`
    pub green_right: f64,
    /// `‖HGx − GHx‖`
    pub projector_commute: f64,
    /// `‖D G x − G D x‖`
    pub d_commute: f64,
    /// `‖δ G x − G δ x‖`
    pub delta_commute: f64,
    /// `‖x − Hx − Dδ G x − δD G x‖`
    pub decomposition: f64,
}

impl HodgeResiduals {
    pub fn max(&self) -> f64 {
        [
            self.green_left,
            self.green_right,
            self.projector_commute,
            self.d_commute,
            self.delta_commute,
            self.decomposition,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub(crate) fn to_numeric<S: Scalar>(m: &super::QMatrix) -> DMatrix<S> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = &m[(i, j)];
        S::from_parts(rational_to_f64(&z.re), rational_to_f64(&z.im))
    })
}

/// Largest singular value.
pub(crate) fn spectral_norm<S: Scalar>(m: &DMatrix<S>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Orthonormal basis of the null space, one column per null direction.
fn nullspace<S: Scalar>(a: &DMatrix<S>, cols: usize, tol: f64) -> DMatrix<S> {
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let smax = spectral_norm(a);
    if a.nrows() == 0 || smax == 0.0 {
        return DMatrix::identity(cols, cols);
    }
    // pad to at least square so that V is complete
    let padded = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let null: Vec<DVector<S>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * smax)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if null.is_empty() {
        return DMatrix::zeros(cols, 0);
    }
    DMatrix::from_columns(&null)
}

/// Replaces an orthonormal basis of a subspace by the Gram–Schmidt
/// orthonormalization of the projected standard basis, which is independent
/// of the SVD's arbitrary choices.
fn canonical_basis<S: Scalar>(basis: &DMatrix<S>) -> DMatrix<S> {
    let (n, dim) = basis.shape();
    if dim == 0 {
        return basis.clone();
    }
    let proj = basis * basis.adjoint();
    let mut out: Vec<DVector<S>> = Vec::with_capacity(dim);
    for i in 0..n {
        if out.len() == dim {
            break;
        }
        let mut v: DVector<S> = proj.column(i).into_owned();
        for _ in 0..2 {
            for u in &out {
                let c = u.dotc(&v);
                v -= u * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            out.push(v.unscale(norm));
        }
    }
    if out.len() < dim {
        return basis.clone();
    }
    DMatrix::from_columns(&out)
}

impl<S: Scalar> HodgeData<S> {
    pub fn new(complex: &DeformationComplex, rank_tolerance: f64) -> Self {
        let dims = complex.cochain_dims.clone();
        let r = dims.len() - 1;
        let d: Vec<DMatrix<S>> = complex.differentials.iter().map(to_numeric).collect();
        let delta: Vec<DMatrix<S>> = d.iter().map(DMatrix::adjoint).collect();
        let mut laplacians = Vec::with_capacity(r + 1);
        let mut projectors = Vec::with_capacity(r + 1);
        let mut green = Vec::with_capacity(r + 1);
        let mut harmonic_bases = Vec::with_capacity(r + 1);
        for k in 0..=r {
            let c = dims[k];
            let mut lap = DMatrix::<S>::zeros(c, c);
            let mut stacked_rows = 0;
            if k < r {
                lap += &delta[k] * &d[k];
                stacked_rows += dims[k + 1];
            }
            if k > 0 {
                lap += &d[k - 1] * &delta[k - 1];
                stacked_rows += dims[k - 1];
            }
            let mut stacked = DMatrix::<S>::zeros(stacked_rows, c);
            let mut row = 0;
            if k < r {
                stacked.view_mut((0, 0), (dims[k + 1], c)).copy_from(&d[k]);
                row = dims[k + 1];
            }
            if k > 0 {
                stacked.view_mut((row, 0), (dims[k - 1], c)).copy_from(&delta[k - 1]);
            }
            let basis = canonical_basis(&nullspace(&stacked, c, rank_tolerance));
            let proj = &basis * basis.adjoint();
            let sum = &lap + &proj;
            let inv = sum
                .clone()
                .cholesky()
                .map(|ch| ch.inverse())
                .or_else(|| sum.try_inverse())
                .expect("Δ + H is invertible");
            green.push(inv - &proj);
            laplacians.push(lap);
            projectors.push(proj);
            harmonic_bases.push(basis);
        }
        HodgeData {
            dims,
            d,
            delta,
            laplacians,
            projectors,
            green,
            harmonic_bases,
            rank_tolerance,
        }
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn harmonic_dims(&self) -> Vec<usize> {
        self.harmonic_bases.iter().map(|b| b.ncols()).collect()
    }

    /// Residuals of the Green, commutation and decomposition identities on `x ∈ C^k`.
    pub fn residuals(&self, k: usize, x: &DVector<S>) -> HodgeResiduals {
        let r = self.top_degree();
        let (h, g, lap) = (&self.projectors[k], &self.green[k], &self.laplacians[k]);
        let hx = h * x;
        let gx = g * x;
        let mut out = HodgeResiduals {
            green_left: (x - &hx - lap * &gx).norm(),
            green_right: (x - &hx - g * (lap * x)).norm(),
            projector_commute: (h * &gx - g * &hx).norm(),
            ..Default::default()
        };
        let mut decomposed = x - &hx;
        if k < r {
            let dgx = &self.d[k] * &gx;
            out.d_commute = (&dgx - &self.green[k + 1] * (&self.d[k] * x)).norm();
            decomposed -= &self.delta[k] * dgx;
        }
        if k > 0 {
            let dgx = &self.delta[k - 1] * &gx;
            out.delta_commute = (&dgx - &self.green[k - 1] * (&self.delta[k - 1] * x)).norm();
            decomposed -= &self.d[k - 1] * dgx;
        }
        out.decomposition = decomposed.norm();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::rep::tests_support::{abelian_zero, diag12, sl2};
    use super::super::build_complex;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_differentials() {
        let h = HodgeData::<f64>::new(&build_complex(&abelian_zero(2)).unwrap(), 1e-9);
        assert_eq!(h.harmonic_dims(), vec![4, 8, 4]);
        for k in 0..3 {
            assert_eq!(h.projectors[k], DMatrix::identity(h.dims[k], h.dims[k]));
            assert!(h.green[k].norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_single_generator() {
        let h = HodgeData::<f64>::new(&build_complex(&diag12()).unwrap(), 1e-9);
        assert_eq!(h.harmonic_dims(), vec![2, 2]);
        // canonical basis: E₁₁ and E₂₂
        let b = &h.harmonic_bases[0];
        assert!((b[(0, 0)] - 1.0).abs() < 1e-12 && (b[(3, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sl2_contract() {
        let h = HodgeData::<f64>::new(&build_complex(&sl2()).unwrap(), 1e-9);
        assert_eq!(h.harmonic_dims(), vec![1, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..4 {
            let x = DVector::from_fn(h.dims[k], |_, _| f64::sample(&mut rng));
            assert!(h.residuals(k, &x).max() < 1e-10);
        }
    }
}
