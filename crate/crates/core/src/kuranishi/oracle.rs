//! Independent numerical checks of the local model: damped root finding for
//! the Maurer–Cartan equation on the slice, and for zeros of `Φ`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{KuranishiModel, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleParams {
    pub seeds: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Starting points are drawn from the ball of this fraction of the model radius.
    pub start_fraction: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            seeds: 32,
            tol: 1e-10,
            max_iter: 200,
            seed: 0,
            start_fraction: 0.5,
        }
    }
}

fn seed_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

fn random_in_ball<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> DVector<S> {
    let v = DVector::from_fn(dim, |_, _| S::sample(rng));
    let n = v.norm();
    if n == 0.0 {
        return v;
    }
    let s: f64 = rand::Rng::random_range(rng, 0.0..1.0);
    v * S::from_real(s * radius / n)
}

/// Levenberg–Marquardt on `r(x)` with Jacobian `jac(x)`; returns the point
/// when `‖r‖ ≤ tol`.
fn levenberg_marquardt<S: Scalar>(
    mut x: DVector<S>,
    residual: impl Fn(&DVector<S>) -> DVector<S>,
    jac: impl Fn(&DVector<S>) -> DMatrix<S>,
    tol: f64,
    max_iter: usize,
) -> Option<DVector<S>> {
    let mut r = residual(&x);
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        let rn = r.norm();
        if rn <= tol {
            return Some(x);
        }
        if !rn.is_finite() {
            return None;
        }
        let j = jac(&x);
        let jh = j.adjoint();
        let g = &jh * &r;
        let jtj = &jh * &j;
        loop {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += S::from_real(lambda);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                if lambda > 1e12 {
                    return None;
                }
                continue;
            };
            let trial = &x + &step;
            let rt = residual(&trial);
            if rt.norm() < rn {
                x = trial;
                r = rt;
                lambda = (lambda / 3.0).max(1e-15);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                return if rn <= tol { Some(x) } else { None };
            }
        }
    }
    (r.norm() <= tol).then_some(x)
}

/// Solves `D₁β + ½[β, β] = 0, δ₀β = 0` from random small starting points.
/// Seeds that do not converge are dropped.
pub fn mc_slice_solve_bruteforce<S: Scalar>(model: &KuranishiModel<S>, params: &OracleParams) -> Vec<DVector<S>> {
    let n = model.dim(1);
    let d1 = model.hodge().d.get(1).cloned();
    let delta0 = model.hodge().delta[0].clone();
    let residual = |b: &DVector<S>| {
        let mc = model.mc_residual(b);
        let gauge = &delta0 * b;
        let mut out = DVector::zeros(mc.len() + gauge.len());
        out.rows_mut(0, mc.len()).copy_from(&mc);
        out.rows_mut(mc.len(), gauge.len()).copy_from(&gauge);
        out
    };
    let jac = |b: &DVector<S>| {
        let mut top = model.bracket_matrix(b);
        if let Some(d1) = &d1 {
            top += d1;
        }
        let mut j = DMatrix::zeros(top.nrows() + delta0.nrows(), n);
        j.view_mut((0, 0), top.shape()).copy_from(&top);
        j.view_mut((top.nrows(), 0), delta0.shape()).copy_from(&delta0);
        j
    };
    let start_radius = params.start_fraction * model.radius();
    (0..params.seeds)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = seed_rng(params.seed, i);
            let start = random_in_ball::<S>(&mut rng, n, start_radius);
            levenberg_marquardt(start, residual, jac, params.tol, params.max_iter)
        })
        .collect()
}

/// Finds harmonic `γ ∈ ℋ¹` with `Φ(γ) = 0` inside the model ball, by damped
/// Gauss–Newton in harmonic coordinates. Returns up to `count` zeros as
/// elements of `C¹`.
pub fn sample_obstruction_zeros<S: Scalar>(
    model: &KuranishiModel<S>,
    count: usize,
    params: &OracleParams,
) -> Vec<DVector<S>> {
    let h1 = model.harmonic_basis(1).clone();
    let h2 = model.harmonic_basis(2.min(model.hodge().top_degree())).clone();
    let has_h2 = model.hodge().top_degree() >= 2 && h2.ncols() > 0;
    let d = h1.ncols();
    let start_radius = params.start_fraction * model.radius();
    let residual = |c: &DVector<S>| -> DVector<S> {
        if !has_h2 {
            return DVector::zeros(0);
        }
        match model.obstruction(&(&h1 * c)) {
            Ok(phi) => h2.adjoint() * phi,
            Err(_) => DVector::from_element(h2.ncols(), S::from_real(f64::INFINITY)),
        }
    };
    let jac = |c: &DVector<S>| -> DMatrix<S> {
        let gamma = &h1 * c;
        let Ok(beta) = model.kuranishi_invert(&gamma) else {
            return DMatrix::zeros(h2.ncols(), d);
        };
        let t_inv = model
            .kuranishi_tangent(&beta)
            .try_inverse()
            .unwrap_or_else(|| DMatrix::zeros(gamma.len(), gamma.len()));
        h2.adjoint() * model.bracket_matrix(&beta) * t_inv * &h1
    };
    let attempts = (4 * count).max(count + 8);
    let found: Vec<Option<DVector<S>>> = (0..attempts)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_rng(params.seed ^ 0x5eed, i);
            let start = random_in_ball::<S>(&mut rng, d, start_radius);
            let c = levenberg_marquardt(start, residual, jac, params.tol, params.max_iter)?;
            let gamma = &h1 * c;
            (gamma.norm() < model.radius()).then_some(gamma)
        })
        .collect();
    found.into_iter().flatten().take(count).collect()
}
