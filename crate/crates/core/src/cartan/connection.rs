//! Connections on the trivial bundle, curvature and gauge transformations.
//!
//! A connection is `∇ = ∇₀ + α`, where `∇₀ξ s = a(ξ) s` entrywise is the
//! canonical flat connection and `α` is an End(E)-valued 1-form.

use super::{d_l, graded_bracket, wedge, CartanError, LForm};
use crate::algebroid::AlgebroidSpec;
use crate::exactpoly::PolyMatrix;

/// Which bundle a form takes values in; decides how `α` acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuedIn {
    /// Column values, acted on by left multiplication.
    E,
    /// Square matrix values, acted on by the graded bracket.
    EndE,
}

/// An End(E)-valued 1-form `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionForm {
    alpha: LForm,
}

impl ConnectionForm {
    pub fn new(alpha: LForm) -> Result<Self, CartanError> {
        if alpha.is_zero() && alpha.degree() != 1 {
            let (rank, n, shape) = (alpha.rank(), alpha.num_vars(), alpha.shape());
            return Self::new(LForm::zero(rank, n, 1, shape));
        }
        if alpha.degree() != 1 {
            return Err(CartanError::NotDegreeOne(alpha.degree()));
        }
        let (r, c) = alpha.shape();
        if r != c {
            return Err(CartanError::Dimension(format!(
                "connection values must be square, got {r}×{c}"
            )));
        }
        Ok(ConnectionForm { alpha })
    }

    /// The reference connection `∇₀` on a rank-`m` bundle.
    pub fn trivial(rank: usize, num_vars: usize, m: usize) -> Self {
        ConnectionForm {
            alpha: LForm::zero(rank, num_vars, 1, (m, m)),
        }
    }

    pub fn alpha(&self) -> &LForm {
        &self.alpha
    }

    pub fn dim_e(&self) -> usize {
        self.alpha.shape().0
    }
}

/// A gauge transformation with an exact polynomial inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMap {
    phi: PolyMatrix,
    phi_inv: PolyMatrix,
}

impl GaugeMap {
    pub fn new(phi: PolyMatrix, phi_inv: PolyMatrix) -> Result<Self, CartanError> {
        let (r, c) = phi.shape();
        if r != c || phi_inv.shape() != (r, c) || phi.num_vars() != phi_inv.num_vars() {
            return Err(CartanError::Dimension(format!(
                "gauge map and inverse must be square of equal size, got {:?} and {:?}",
                phi.shape(),
                phi_inv.shape()
            )));
        }
        let id = PolyMatrix::identity(r, phi.num_vars());
        if &phi * &phi_inv != id {
            return Err(CartanError::NotInverse("phi·phi_inv ≠ identity".into()));
        }
        if &phi_inv * &phi != id {
            return Err(CartanError::NotInverse("phi_inv·phi ≠ identity".into()));
        }
        Ok(GaugeMap { phi, phi_inv })
    }

    pub fn identity(m: usize, num_vars: usize) -> Self {
        let id = PolyMatrix::identity(m, num_vars);
        GaugeMap {
            phi: id.clone(),
            phi_inv: id,
        }
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn phi_inv(&self) -> &PolyMatrix {
        &self.phi_inv
    }

    /// The product `φψ`.
    pub fn compose(&self, psi: &GaugeMap) -> GaugeMap {
        GaugeMap {
            phi: &self.phi * &psi.phi,
            phi_inv: &psi.phi_inv * &self.phi_inv,
        }
    }
}

/// Checks that `∇₀` is flat, i.e. the anchor is a bracket morphism.
pub fn reference_is_flat(spec: &AlgebroidSpec) -> bool {
    spec.validate().anchor_failures.is_empty()
}

/// Covariant exterior derivative `d^∇ω`.
pub fn covariant_d(
    spec: &AlgebroidSpec,
    a: &ConnectionForm,
    omega: &LForm,
    valued_in: ValuedIn,
) -> Result<LForm, CartanError> {
    let m = a.dim_e();
    match valued_in {
        ValuedIn::E if omega.shape().0 != m => {
            return Err(CartanError::Shape {
                left: a.alpha.shape(),
                right: omega.shape(),
            })
        }
        ValuedIn::EndE if omega.shape() != (m, m) => {
            return Err(CartanError::Shape {
                left: a.alpha.shape(),
                right: omega.shape(),
            })
        }
        _ => {}
    }
    let d = d_l(spec, omega);
    let action = match valued_in {
        ValuedIn::E => wedge(&a.alpha, omega)?,
        ValuedIn::EndE => graded_bracket(&a.alpha, omega)?,
    };
    d.add(&action)
}

/// `R = d_L α + α∧α`.
pub fn curvature(spec: &AlgebroidSpec, a: &ConnectionForm) -> LForm {
    let d = d_l(spec, &a.alpha);
    let aa = wedge(&a.alpha, &a.alpha).expect("square values");
    d.add(&aa).expect("both degree 2")
}

/// `d^∇R`, which must vanish identically.
pub fn bianchi_check(spec: &AlgebroidSpec, a: &ConnectionForm) -> LForm {
    let r = curvature(spec, a);
    covariant_d(spec, a, &r, ValuedIn::EndE).expect("curvature is End(E)-valued")
}

/// `α^φ = φ⁻¹ d_L φ + φ⁻¹ α φ`.
pub fn gauge_transform(
    spec: &AlgebroidSpec,
    a: &ConnectionForm,
    phi: &GaugeMap,
) -> Result<ConnectionForm, CartanError> {
    if phi.phi.shape() != a.alpha.shape() {
        return Err(CartanError::Shape {
            left: a.alpha.shape(),
            right: phi.phi.shape(),
        });
    }
    let rank = a.alpha.rank();
    let dphi = d_l(spec, &LForm::function(rank, phi.phi.clone()));
    let left = dphi.map_components(|v| &phi.phi_inv * v);
    let conj = a.alpha.map_components(|v| &(&phi.phi_inv * v) * &phi.phi);
    ConnectionForm::new(left.add(&conj)?)
}
