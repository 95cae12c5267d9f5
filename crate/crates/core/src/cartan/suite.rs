//! Randomized exact checks of the graded Cartan calculus.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    bianchi_check, covariant_d, curvature, d_l, gauge_transform, graded_bracket, insert,
    lie_derivative, wedge, CartanError, ConnectionForm, GaugeMap, LForm, ValuedIn,
};
use crate::algebroid::{AlgebroidSpec, SectionExpr};
use crate::exactpoly::{rat, PolyMatrix, Polynomial};
use crate::tuples::combinations;

pub const CARTAN_IDENTITIES: [&str; 9] = [
    "i_ξ(ω∧τ) = i_ξω∧τ + (-1)^p ω∧i_ξτ",
    "𝓛_ξ(ω∧τ) = 𝓛_ξω∧τ + ω∧𝓛_ξτ",
    "𝓛_ξ i_η − i_η 𝓛_ξ = i_[ξ,η]",
    "𝓛_ξ 𝓛_η − 𝓛_η 𝓛_ξ = 𝓛_[ξ,η]",
    "i_ξ i_η + i_η i_ξ = 0",
    "d(ω∧τ) = dω∧τ + (-1)^p ω∧dτ",
    "d∘d = 0",
    "𝓛_ξ d = d 𝓛_ξ",
    "𝓛_ξ = i_ξ d + d i_ξ",
];

pub const CONNECTION_IDENTITIES: [&str; 6] = [
    "d^∇(α∧ω) = d α∧ω + (-1)^p α∧d^∇ω",
    "d^∇[ω,τ] = [d^∇ω,τ] + (-1)^p [ω,d^∇τ]",
    "d^∇ d^∇ ω = R∧ω",
    "d^∇ R = 0",
    "R(α^φ) = φ⁻¹ R(α) φ",
    "(α^φ)^ψ = α^(φψ)",
];

/// Outcome of one identity over all trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Rendering of the first nonzero residual, if any.
    pub first_residual: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl SuiteReport {
    pub fn passed_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn sparse_poly<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, max_degree: u32, density: f64) -> Polynomial {
    if rng.random_bool(density) {
        Polynomial::random(rng, num_vars, max_degree, 3)
    } else {
        Polynomial::zero(num_vars)
    }
}

/// Random section with sparse polynomial components.
pub fn random_section<R: Rng + ?Sized>(rng: &mut R, spec: &AlgebroidSpec, max_degree: u32) -> SectionExpr {
    SectionExpr::new(
        (0..spec.rank())
            .map(|_| sparse_poly(rng, spec.num_vars(), max_degree, 0.75))
            .collect(),
    )
}

/// Random form of the given degree and value shape.
pub fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &AlgebroidSpec,
    degree: usize,
    shape: (usize, usize),
    max_degree: u32,
) -> LForm {
    let n = spec.num_vars();
    let mut comps = Vec::new();
    for t in combinations(spec.rank(), degree) {
        if rng.random_bool(0.7) {
            let v = PolyMatrix::from_fn(shape.0, shape.1, n, |_, _| sparse_poly(rng, n, max_degree, 0.7));
            comps.push((t, v));
        }
    }
    LForm::from_components(spec.rank(), n, degree, shape, comps).expect("well-formed components")
}

/// Random gauge map: a constant diagonal times elementary unipotent factors.
pub fn random_gauge_map<R: Rng + ?Sized>(rng: &mut R, m: usize, num_vars: usize, max_degree: u32) -> GaugeMap {
    const SCALES: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];
    let mut phi = PolyMatrix::identity(m, num_vars);
    let mut phi_inv = PolyMatrix::identity(m, num_vars);
    for i in 0..m {
        let (a, b) = SCALES[rng.random_range(0..SCALES.len())];
        phi[(i, i)] = Polynomial::constant(num_vars, rat(a, b));
        phi_inv[(i, i)] = Polynomial::constant(num_vars, rat(b, a));
    }
    if m > 1 {
        for _ in 0..2 {
            let i = rng.random_range(0..m);
            let j = (i + rng.random_range(1..m)) % m;
            let f = Polynomial::random(rng, num_vars, max_degree.min(1), 2);
            let mut e = PolyMatrix::identity(m, num_vars);
            e[(i, j)] = f.clone();
            let mut e_inv = PolyMatrix::identity(m, num_vars);
            e_inv[(i, j)] = -&f;
            phi = &phi * &e;
            phi_inv = &e_inv * &phi_inv;
        }
    }
    GaugeMap::new(phi, phi_inv).expect("inverse by construction")
}

fn residual(r: Result<LForm, CartanError>) -> Option<String> {
    match r {
        Ok(f) if f.is_zero() => None,
        Ok(f) => Some(format!("{f:?}")),
        Err(e) => Some(format!("error: {e}")),
    }
}

fn sign_term(p: usize, f: LForm) -> LForm {
    if p.is_multiple_of(2) {
        f
    } else {
        f.neg()
    }
}

fn cartan_trial(spec: &AlgebroidSpec, rng: &mut ChaCha8Rng, max_degree: u32) -> Vec<Option<String>> {
    let r = spec.rank();
    let p = rng.random_range(0..=r);
    let q = rng.random_range(0..=r - p);
    let scalar = (1, 1);
    let omega = random_form(rng, spec, p, scalar, max_degree);
    let tau = random_form(rng, spec, q, scalar, max_degree);
    let xi = random_section(rng, spec, max_degree);
    let eta = random_section(rng, spec, max_degree);
    let d = |f: &LForm| d_l(spec, f);
    let ins = |s: &SectionExpr, f: &LForm| insert(s, f).expect("rank checked");
    let lie = |s: &SectionExpr, f: &LForm| lie_derivative(spec, s, f).expect("rank checked");
    let w = |a: &LForm, b: &LForm| wedge(a, b).expect("scalar forms");
    let bracket = spec.section_bracket_unchecked(&xi, &eta);

    let checks: [Box<dyn Fn() -> Result<LForm, CartanError> + '_>; 9] = [
        Box::new(|| {
            let lhs = ins(&xi, &w(&omega, &tau));
            let rhs = w(&ins(&xi, &omega), &tau).add(&sign_term(p, w(&omega, &ins(&xi, &tau))))?;
            lhs.sub(&rhs)
        }),
        Box::new(|| {
            let lhs = lie(&xi, &w(&omega, &tau));
            let rhs = w(&lie(&xi, &omega), &tau).add(&w(&omega, &lie(&xi, &tau)))?;
            lhs.sub(&rhs)
        }),
        Box::new(|| {
            lie(&xi, &ins(&eta, &omega))
                .sub(&ins(&eta, &lie(&xi, &omega)))?
                .sub(&ins(&bracket, &omega))
        }),
        Box::new(|| {
            lie(&xi, &lie(&eta, &omega))
                .sub(&lie(&eta, &lie(&xi, &omega)))?
                .sub(&lie(&bracket, &omega))
        }),
        Box::new(|| ins(&xi, &ins(&eta, &omega)).add(&ins(&eta, &ins(&xi, &omega)))),
        Box::new(|| {
            let lhs = d(&w(&omega, &tau));
            let rhs = w(&d(&omega), &tau).add(&sign_term(p, w(&omega, &d(&tau))))?;
            lhs.sub(&rhs)
        }),
        Box::new(|| Ok(d(&d(&omega)))),
        Box::new(|| lie(&xi, &d(&omega)).sub(&d(&lie(&xi, &omega)))),
        Box::new(|| {
            ins(&xi, &d(&omega))
                .add(&d(&ins(&xi, &omega)))?
                .sub(&lie(&xi, &omega))
        }),
    ];
    checks.iter().map(|c| residual(c())).collect()
}

fn connection_trial(
    spec: &AlgebroidSpec,
    m: usize,
    rng: &mut ChaCha8Rng,
    max_degree: u32,
) -> Vec<Option<String>> {
    let r = spec.rank();
    let n = spec.num_vars();
    let sq = (m, m);
    let a = ConnectionForm::new(random_form(rng, spec, 1, sq, max_degree)).expect("degree 1");
    let p = rng.random_range(0..=r);
    let q = rng.random_range(0..=r - p);
    let scalar = random_form(rng, spec, p, (1, 1), max_degree);
    let section = random_form(rng, spec, q, (m, 1), max_degree);
    let end_p = random_form(rng, spec, p, sq, max_degree);
    let end_q = random_form(rng, spec, q, sq, max_degree);
    let phi = random_gauge_map(rng, m, n, max_degree);
    let psi = random_gauge_map(rng, m, n, max_degree);
    let dn = |f: &LForm, v: ValuedIn| covariant_d(spec, &a, f, v);

    let checks: [Box<dyn Fn() -> Result<LForm, CartanError> + '_>; 6] = [
        Box::new(|| {
            let lhs = dn(&wedge(&scalar, &section)?, ValuedIn::E)?;
            let rhs = wedge(&d_l(spec, &scalar), &section)?
                .add(&sign_term(p, wedge(&scalar, &dn(&section, ValuedIn::E)?)?))?;
            lhs.sub(&rhs)
        }),
        Box::new(|| {
            let lhs = dn(&graded_bracket(&end_p, &end_q)?, ValuedIn::EndE)?;
            let rhs = graded_bracket(&dn(&end_p, ValuedIn::EndE)?, &end_q)?.add(&sign_term(
                p,
                graded_bracket(&end_p, &dn(&end_q, ValuedIn::EndE)?)?,
            ))?;
            lhs.sub(&rhs)
        }),
        Box::new(|| {
            let dd = dn(&dn(&section, ValuedIn::E)?, ValuedIn::E)?;
            dd.sub(&wedge(&curvature(spec, &a), &section)?)
        }),
        Box::new(|| Ok(bianchi_check(spec, &a))),
        Box::new(|| {
            let transformed = curvature(spec, &gauge_transform(spec, &a, &phi)?);
            let conj = curvature(spec, &a).map_components(|v| &(phi.phi_inv() * v) * phi.phi());
            transformed.sub(&conj)
        }),
        Box::new(|| {
            let twice = gauge_transform(spec, &gauge_transform(spec, &a, &phi)?, &psi)?;
            let once = gauge_transform(spec, &a, &phi.compose(&psi))?;
            twice.alpha().sub(once.alpha())
        }),
    ];
    checks.iter().map(|c| residual(c())).collect()
}

fn aggregate(names: &[&'static str], per_trial: Vec<Vec<Option<String>>>) -> SuiteReport {
    let outcomes = names
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let failures: Vec<&String> = per_trial.iter().filter_map(|t| t[k].as_ref()).collect();
            IdentityOutcome {
                name,
                trials: per_trial.len(),
                failures: failures.len(),
                first_residual: failures.first().map(|s| (*s).clone()),
            }
        })
        .collect();
    SuiteReport { outcomes }
}

/// Runs the nine graded Cartan identities on random scalar forms and sections.
///
/// Trials run in parallel; trial `t` draws from an independent stream of
/// `seed`, so the report is deterministic.
pub fn cartan_identity_suite(spec: &AlgebroidSpec, trials: usize, seed: u64, max_degree: u32) -> SuiteReport {
    let per_trial: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| cartan_trial(spec, &mut trial_rng(seed, t), max_degree))
        .collect();
    aggregate(&CARTAN_IDENTITIES, per_trial)
}

/// Runs the connection identities with rank-`m` bundle values.
pub fn connection_identity_suite(
    spec: &AlgebroidSpec,
    m: usize,
    trials: usize,
    seed: u64,
    max_degree: u32,
) -> SuiteReport {
    let per_trial: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| connection_trial(spec, m, &mut trial_rng(seed, t), max_degree))
        .collect();
    aggregate(&CONNECTION_IDENTITIES, per_trial)
}
