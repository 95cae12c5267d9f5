//! Deformation theory of a flat connection over a one-point base.
//!
//! Over a point a flat connection is a representation `ρ` of a Lie algebra,
//! the deformation complex is the Chevalley–Eilenberg complex with End(V)
//! coefficients, and Hodge theory, the Kuranishi map and the obstruction map
//! are dense linear algebra. Differentials are assembled exactly; everything
//! after the Hodge decomposition is floating point, generic over a real or a
//! complex scalar field.

use nalgebra::{ComplexField, Complex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod hodge;
mod model;
mod oracle;
mod rep;
mod report;

pub use hodge::{HodgeData, HodgeResiduals};
pub use model::{GaugeOrbitCheck, KuranishiModel, SliceDecomposition, SolverParams};
pub use oracle::{mc_slice_solve_bruteforce, sample_obstruction_zeros, OracleParams};
pub use rep::{build_complex, cq, validate_rep, DeformationComplex, PairResidual, QMatrix, RepSpec, RepValidation, CQ};
pub use report::{local_model_report, ModuliReport, Num, QuadraticTerm, SampleStats, SolverDiagnostics};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KuranishiError {
    #[error("a representation needs a Lie algebra (num_vars = 0), got num_vars = {0}")]
    NotLieAlgebra(usize),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("complex entry in a representation over the reals")]
    ComplexEntryInRealRep,
    #[error("representation is not flat on pairs {0:?}")]
    NotFlat(Vec<(usize, usize, f64)>),
    #[error("D_{} D_{} ≠ 0", .0 + 1, .0)]
    NotComplex(usize),
    #[error("fixed-point iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("gauge map is singular")]
    SingularGauge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScalarField::Real => "real",
            ScalarField::Complex => "complex",
        })
    }
}

/// Floating-point scalars the numeric layer runs over (`f64` or `Complex<f64>`).
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync {
    const FIELD: ScalarField;

    fn from_parts(re: f64, im: f64) -> Self;

    /// Uniform sample from `[-1, 1]` (in each real coordinate).
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform sample from `{-1, 0, 1}` (in each real coordinate).
    fn lattice<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_num(self) -> Num;
}

impl Scalar for f64 {
    const FIELD: ScalarField = ScalarField::Real;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random_range(-1.0..=1.0)
    }

    fn lattice<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random_range(-1i32..=1) as f64
    }

    fn to_num(self) -> Num {
        Num::Real(self)
    }
}

impl Scalar for Complex<f64> {
    const FIELD: ScalarField = ScalarField::Complex;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    }

    fn lattice<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(rng.random_range(-1i32..=1) as f64, rng.random_range(-1i32..=1) as f64)
    }

    fn to_num(self) -> Num {
        Num::Complex([self.re, self.im])
    }
}
