use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::C_BR;
use super::{KuranishiModel, Scalar, ScalarField};

/// A real number, or a complex one as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

/// Coefficient `c` of `½H₂[h_a, h_b]` in the harmonic basis of `ℋ²` (`a ≤ b`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticTerm {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub samples: usize,
    pub radius: f64,
    pub zero_tol: f64,
    pub unobstructed: usize,
    pub failures: usize,
    /// Absent when no samples were drawn.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_obstruction_norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub radius: f64,
    pub default_radius: f64,
    pub dg_norm: f64,
    pub bracket_bound: f64,
    pub max_iter: usize,
    pub tol_fix: f64,
    pub rank_tolerance: f64,
    pub max_fixed_point_iterations: usize,
}

/// Summary of the local model of the moduli space at a flat connection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuliReport {
    pub h_dims: Vec<usize>,
    pub index: i64,
    pub irreducible: bool,
    pub smooth: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_local_dim: Option<usize>,
    pub scalar_field: ScalarField,
    pub dim_v: usize,
    pub cochain_dims: Vec<usize>,
    pub commutant_dim: usize,
    pub obstruction_identically_zero: bool,
    pub quadratic_form: Vec<QuadraticTerm>,
    pub sampling: SampleStats,
    pub solver: SolverDiagnostics,
    pub notes: Vec<String>,
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn clean_num<S: Scalar>(s: S) -> Option<Num> {
    match s.to_num() {
        Num::Real(x) => (clean(x) != 0.0).then_some(Num::Real(clean(x))),
        Num::Complex([re, im]) => {
            let (re, im) = (clean(re), clean(im));
            (re != 0.0 || im != 0.0).then_some(Num::Complex([re, im]))
        }
    }
}

/// Assembles cohomology, smoothness, the quadratic part of `Φ` and the
/// fraction of lattice samples `γ ∈ ℋ¹` in the ball with `‖Φ(γ)‖ ≤ zero_tol`.
///
/// Sample coordinates are drawn from `{−1, 0, 1}` in the harmonic basis and
/// scaled to lie in half the ball, so that algebraic zero sets of positive
/// codimension still receive a positive fraction of the samples.
pub fn local_model_report<S: Scalar>(
    model: &KuranishiModel<S>,
    n_samples: usize,
    radius: Option<f64>,
    seed: u64,
    zero_tol: f64,
) -> ModuliReport {
    let h_dims = model.h_dims();
    let top = h_dims.len() - 1;
    let h1 = h_dims.get(1).copied().unwrap_or(0);
    let h2 = if top >= 2 { h_dims[2] } else { 0 };
    let smooth = h2 == 0;

    let mut quadratic_form = Vec::new();
    if h2 > 0 {
        let b1 = model.harmonic_basis(1);
        for a in 0..h1 {
            for b in a..h1 {
                let ha: DVector<S> = b1.column(a).into_owned();
                let hb: DVector<S> = b1.column(b).into_owned();
                let q = model.harmonic_coords(2, &(model.bracket(&ha, &hb) * S::from_real(0.5)));
                for (c, v) in q.iter().enumerate() {
                    if let Some(value) = clean_num(*v) {
                        quadratic_form.push(QuadraticTerm { a, b, c, value });
                    }
                }
            }
        }
    }

    let radius = radius.unwrap_or(model.radius());
    let per_coord = if S::FIELD == ScalarField::Complex { 2.0 } else { 1.0 };
    let scale = if h1 > 0 {
        0.5 * radius / (h1 as f64 * per_coord).sqrt()
    } else {
        0.0
    };
    let outcomes: Vec<(Option<f64>, usize)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let coords = DVector::from_fn(h1, |_, _| S::lattice(&mut rng) * S::from_real(scale));
            let gamma = model.from_harmonic(1, &coords);
            match model.kuranishi_invert_counted(&gamma) {
                Ok((beta, iters)) => {
                    let phi = if h2 > 0 {
                        model.quadratic_term(&beta).norm()
                    } else {
                        0.0
                    };
                    (Some(phi), iters)
                }
                Err(_) => (None, 0),
            }
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.0.is_none()).count();
    let norms: Vec<f64> = outcomes.iter().filter_map(|o| o.0).collect();
    let unobstructed = norms.iter().filter(|&&n| n <= zero_tol).count();
    let sampling = SampleStats {
        samples: n_samples,
        radius,
        zero_tol,
        unobstructed,
        failures,
        zero_fraction: (n_samples > 0).then(|| unobstructed as f64 / n_samples as f64),
        max_obstruction_norm: norms.iter().copied().reduce(f64::max).map(clean),
    };

    let obstruction_identically_zero =
        smooth || (quadratic_form.is_empty() && unobstructed == n_samples);
    let commutant_dim = model.commutant_dim();
    let mut notes = Vec::new();
    if commutant_dim != 1 {
        notes.push(format!(
            "reducible: commutant has dimension {commutant_dim}; the gauge group does not act freely and the slice chart is only formal"
        ));
    }
    if smooth {
        notes.push(format!("H^2 = 0: the local moduli space is smooth of dimension {h1}"));
    }
    if model.dg_norm() <= 1e-12 {
        notes.push("δ₁G₂ = 0: the Kuranishi map is the identity".to_string());
    }

    ModuliReport {
        index: model.index(),
        irreducible: model.is_irreducible(),
        smooth,
        expected_local_dim: smooth.then_some(h1),
        scalar_field: S::FIELD,
        dim_v: model.rep().dim_v(),
        cochain_dims: model.hodge().dims.clone(),
        commutant_dim,
        obstruction_identically_zero,
        quadratic_form,
        sampling,
        solver: SolverDiagnostics {
            radius: model.radius(),
            default_radius: model.default_radius(),
            dg_norm: clean(model.dg_norm()),
            bracket_bound: C_BR,
            max_iter: model.params().max_iter,
            tol_fix: model.params().tol_fix,
            rank_tolerance: model.params().rank_tolerance,
            max_fixed_point_iterations: outcomes.iter().map(|o| o.1).max().unwrap_or(0),
        },
        notes,
        h_dims,
    }
}

#[cfg(test)]
mod tests {
    use super::super::rep::tests_support::*;
    use super::super::SolverParams;
    use super::*;

    #[test]
    fn sl2_report() {
        let model = KuranishiModel::<f64>::new(sl2(), SolverParams::default()).unwrap();
        let r = local_model_report(&model, 10, None, 1, 1e-10);
        assert_eq!(r.h_dims, vec![1, 0, 0, 1]);
        assert!(r.irreducible && r.smooth);
        assert_eq!(r.expected_local_dim, Some(0));
        assert_eq!(r.sampling.zero_fraction, Some(1.0));
    }

    #[test]
    fn abelian_line_is_unobstructed() {
        let model = KuranishiModel::<f64>::new(abelian_zero(1), SolverParams::default()).unwrap();
        let r = local_model_report(&model, 20, None, 1, 1e-10);
        assert_eq!(r.h_dims, vec![1, 2, 1]);
        assert!(!r.smooth);
        assert!(r.obstruction_identically_zero);
        assert_eq!(r.sampling.zero_fraction, Some(1.0));
    }

    #[test]
    fn commuting_variety_fraction() {
        let model = KuranishiModel::<f64>::new(abelian_zero(2), SolverParams::default()).unwrap();
        let r = local_model_report(&model, 200, None, 1, 1e-10);
        let f = r.sampling.zero_fraction.unwrap();
        assert!(f > 0.0 && f < 1.0, "fraction {f}");
        assert!(!r.quadratic_form.is_empty());
        assert!(!r.irreducible);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn empty_sampling_has_no_fraction() {
        let model = KuranishiModel::<f64>::new(abelian_zero(1), SolverParams::default()).unwrap();
        let r = local_model_report(&model, 0, None, 1, 1e-10);
        assert_eq!(r.sampling.zero_fraction, None);
    }
}
