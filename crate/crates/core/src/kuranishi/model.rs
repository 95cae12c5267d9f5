use nalgebra::{DMatrix, DVector};

use super::hodge::{spectral_norm, to_numeric, HodgeData};
use super::rep::{build_complex, RepSpec};
use super::{KuranishiError, Scalar};
use crate::tuples::tuple_index;

/// Bound `‖[β, γ]‖ ≤ C_BR ‖β‖ ‖γ‖` for the bracket `C¹ × C¹ → C²` in
/// Frobenius norms.
pub const C_BR: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams {
    /// Ball radius for `F` and `Φ`; `None` selects the contraction default.
    pub radius: Option<f64>,
    pub max_iter: usize,
    pub tol_fix: f64,
    pub rank_tolerance: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            radius: None,
            max_iter: 200,
            tol_fix: 1e-12,
            rank_tolerance: 1e-9,
        }
    }
}

/// Hodge data plus the Kuranishi and obstruction maps of a flat representation.
#[derive(Clone, Debug)]
pub struct KuranishiModel<S: Scalar> {
    rep: RepSpec,
    hodge: HodgeData<S>,
    rho: Vec<DMatrix<S>>,
    // δ₁ G₂ : C² → C¹
    dg: DMatrix<S>,
    dg_norm: f64,
    default_radius: f64,
    radius: f64,
    params: SolverParams,
}

/// Result of the gauge-orbit tangent check at one step size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeOrbitCheck {
    pub t: f64,
    /// `‖(α^{φ(t)} − α)/t − D₀γ‖`
    pub residual: f64,
    pub tangent_norm: f64,
}

/// Splitting `x = D₀u + v` with `δ₀v = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceDecomposition<S: Scalar> {
    pub u: DVector<S>,
    pub v: DVector<S>,
    pub residual: f64,
}

impl<S: Scalar> KuranishiModel<S> {
    pub fn new(rep: RepSpec, params: SolverParams) -> Result<Self, KuranishiError> {
        if rep.scalar_field() != S::FIELD {
            return Err(KuranishiError::Dimension(format!(
                "model over {} scalars for a {} representation",
                S::FIELD,
                rep.scalar_field()
            )));
        }
        let complex = build_complex(&rep)?;
        let hodge = HodgeData::<S>::new(&complex, params.rank_tolerance);
        let rho = rep.rho().iter().map(to_numeric).collect();
        let dims = &hodge.dims;
        let dg = if dims.len() > 2 {
            &hodge.delta[1] * &hodge.green[2]
        } else {
            DMatrix::zeros(dims[1], 0)
        };
        let dg_norm = spectral_norm(&dg);
        let default_radius = if dg_norm <= 1e-12 {
            1.0
        } else {
            1.0 / (4.0 * dg_norm * C_BR)
        };
        Ok(KuranishiModel {
            rep,
            hodge,
            rho,
            dg,
            dg_norm,
            default_radius,
            radius: params.radius.unwrap_or(default_radius),
            params,
        })
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn hodge(&self) -> &HodgeData<S> {
        &self.hodge
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn default_radius(&self) -> f64 {
        self.default_radius
    }

    /// Spectral norm of `δ₁G₂`.
    pub fn dg_norm(&self) -> f64 {
        self.dg_norm
    }

    pub fn dim(&self, k: usize) -> usize {
        self.hodge.dims.get(k).copied().unwrap_or(0)
    }

    pub fn h_dims(&self) -> Vec<usize> {
        self.hodge.harmonic_dims()
    }

    pub fn index(&self) -> i64 {
        alternating_sum(&self.h_dims())
    }

    /// Dimension of the commutant `ker D₀`.
    pub fn commutant_dim(&self) -> usize {
        self.h_dims()[0]
    }

    pub fn is_irreducible(&self) -> bool {
        self.commutant_dim() == 1
    }

    pub fn harmonic_basis(&self, k: usize) -> &DMatrix<S> {
        &self.hodge.harmonic_bases[k]
    }

    fn m(&self) -> usize {
        self.rep.dim_v()
    }

    fn block(&self, v: &DVector<S>, slot: usize) -> DMatrix<S> {
        let m = self.m();
        DMatrix::from_fn(m, m, |p, q| v[slot * m * m + p * m + q])
    }

    /// `[β, γ](e_i, e_j) = [β_i, γ_j] − [β_j, γ_i]` for `β, γ ∈ C¹`.
    pub fn bracket(&self, beta: &DVector<S>, gamma: &DVector<S>) -> DVector<S> {
        let r = self.rep.rank();
        let m = self.m();
        let mut out = DVector::zeros(self.dim(2));
        let b: Vec<_> = (0..r).map(|i| self.block(beta, i)).collect();
        let g: Vec<_> = (0..r).map(|i| self.block(gamma, i)).collect();
        for i in 0..r {
            for j in (i + 1)..r {
                let c = &b[i] * &g[j] - &g[j] * &b[i] - (&b[j] * &g[i] - &g[i] * &b[j]);
                let off = tuple_index(r, &[i, j]) * m * m;
                for p in 0..m {
                    for q in 0..m {
                        out[off + p * m + q] = c[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Matrix of `u ↦ [β, u]`, `C¹ → C²`.
    pub fn bracket_matrix(&self, beta: &DVector<S>) -> DMatrix<S> {
        let n = self.dim(1);
        let mut out = DMatrix::zeros(self.dim(2), n);
        let mut e = DVector::zeros(n);
        for c in 0..n {
            e[c] = S::one();
            out.set_column(c, &self.bracket(beta, &e));
            e[c] = S::zero();
        }
        out
    }

    fn half() -> S {
        S::from_real(0.5)
    }

    fn d1(&self, beta: &DVector<S>) -> DVector<S> {
        if self.hodge.d.len() > 1 {
            &self.hodge.d[1] * beta
        } else {
            DVector::zeros(self.dim(2))
        }
    }

    /// `D₁β + ½[β, β]`.
    pub fn mc_residual(&self, beta: &DVector<S>) -> DVector<S> {
        self.d1(beta) + self.bracket(beta, beta) * Self::half()
    }

    /// `K(β) = β + ½ δ₁G₂[β, β]`.
    pub fn kuranishi_map(&self, beta: &DVector<S>) -> DVector<S> {
        beta + &self.dg * self.bracket(beta, beta) * Self::half()
    }

    /// `T_βK = id + δ₁G₂ ∘ [β, ·]`.
    pub fn kuranishi_tangent(&self, beta: &DVector<S>) -> DMatrix<S> {
        DMatrix::identity(self.dim(1), self.dim(1)) + &self.dg * self.bracket_matrix(beta)
    }

    /// Inverse of `K` near 0 by the fixed-point iteration `β ← γ − ½δ₁G₂[β, β]`;
    /// also returns the iteration count.
    pub fn kuranishi_invert_counted(&self, gamma: &DVector<S>) -> Result<(DVector<S>, usize), KuranishiError> {
        let scale = gamma.norm().max(1.0);
        let mut beta = DVector::zeros(gamma.len());
        let mut step = f64::INFINITY;
        for it in 1..=self.params.max_iter {
            let next = gamma - &self.dg * self.bracket(&beta, &beta) * Self::half();
            step = (&next - &beta).norm();
            beta = next;
            if !step.is_finite() || beta.norm() > 1e6 * scale {
                return Err(KuranishiError::NoConvergence {
                    iterations: it,
                    residual: step,
                });
            }
            if step <= self.params.tol_fix * scale {
                return Ok((beta, it));
            }
        }
        Err(KuranishiError::NoConvergence {
            iterations: self.params.max_iter,
            residual: step,
        })
    }

    pub fn kuranishi_invert(&self, gamma: &DVector<S>) -> Result<DVector<S>, KuranishiError> {
        self.kuranishi_invert_counted(gamma).map(|(b, _)| b)
    }

    /// `Φ(γ) = ½ H₂[F(γ), F(γ)]` as an element of `C²`.
    pub fn obstruction(&self, gamma: &DVector<S>) -> Result<DVector<S>, KuranishiError> {
        if self.dim(2) == 0 {
            return Ok(DVector::zeros(0));
        }
        let beta = self.kuranishi_invert(gamma)?;
        Ok(&self.hodge.projectors[2] * self.bracket(&beta, &beta) * Self::half())
    }

    /// Leading term `½ H₂[γ, γ]` of `Φ`.
    pub fn quadratic_term(&self, gamma: &DVector<S>) -> DVector<S> {
        if self.dim(2) == 0 {
            return DVector::zeros(0);
        }
        &self.hodge.projectors[2] * self.bracket(gamma, gamma) * Self::half()
    }

    /// Element of `ℋ^k` with the given coordinates in the harmonic basis.
    pub fn from_harmonic(&self, k: usize, coords: &DVector<S>) -> DVector<S> {
        &self.hodge.harmonic_bases[k] * coords
    }

    /// Harmonic-basis coordinates of `x ∈ C^k` (of its harmonic part).
    pub fn harmonic_coords(&self, k: usize, x: &DVector<S>) -> DVector<S> {
        self.hodge.harmonic_bases[k].adjoint() * x
    }

    /// Compares the gauge curve `α^{φ(t)}`, `φ(t) = id + tγ`, at the base
    /// point `α = 0` with its predicted tangent `D₀γ`.
    pub fn gauge_orbit_check(&self, gamma: &DVector<S>, t: f64) -> Result<GaugeOrbitCheck, KuranishiError> {
        let m = self.m();
        if gamma.len() != m * m {
            return Err(KuranishiError::Dimension("γ must lie in C⁰".into()));
        }
        let g = self.block(gamma, 0);
        let phi = DMatrix::identity(m, m) + g * S::from_real(t);
        let phi_inv = phi.clone().try_inverse().ok_or(KuranishiError::SingularGauge)?;
        let r = self.rep.rank();
        let mut curve = DVector::zeros(self.dim(1));
        for i in 0..r {
            let a = &phi_inv * (&self.rho[i] * &phi - &phi * &self.rho[i]);
            for p in 0..m {
                for q in 0..m {
                    curve[i * m * m + p * m + q] = a[(p, q)];
                }
            }
        }
        let tangent = &self.hodge.d[0] * gamma;
        Ok(GaugeOrbitCheck {
            t,
            residual: (curve.unscale(t) - &tangent).norm(),
            tangent_norm: tangent.norm(),
        })
    }

    /// Splits `x ∈ C¹` into a gauge direction `D₀u` and a slice direction `v`.
    pub fn slice_decomposition(&self, x: &DVector<S>) -> SliceDecomposition<S> {
        let u = &self.hodge.delta[0] * (&self.hodge.green[1] * x);
        let v = x - &self.hodge.d[0] * &u;
        let residual = (&self.hodge.delta[0] * &v).norm() + (x - &self.hodge.d[0] * &u - &v).norm();
        SliceDecomposition { u, v, residual }
    }
}

pub(crate) fn alternating_sum(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}
