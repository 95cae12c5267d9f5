//! Command-line front end: reads algebroid, representation, connection and
//! gauge documents and prints text or JSON reports.
//!
//! Exit statuses: 0 success, 1 failed validation, 2 unreadable or malformed
//! input, 3 solver non-convergence.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use algebroid_core::cartan::{
    bianchi_check, cartan_identity_suite, connection_identity_suite, curvature, gauge_transform,
    reference_is_flat, SuiteReport,
};
use algebroid_core::documents::{
    AlgebroidDoc, ConnectionDoc, DocumentError, GaugeDoc, RepDoc, DEFAULT_DEGREE_CAP,
};
use algebroid_core::exactpoly::PolyMatrix;
use algebroid_core::kuranishi::{
    local_model_report, mc_slice_solve_bruteforce, sample_obstruction_zeros,
    validate_rep, KuranishiModel, ModuliReport, OracleParams, Scalar, SolverParams,
};
use algebroid_core::{AlgebroidSpec, LForm, RepSpec, ScalarField};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "algebroid", version, about = "Lie algebroid calculus and local moduli of flat connections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest total degree accepted in input polynomials.
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP, global = true)]
    pub degree_cap: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebroid axioms, or flatness of a representation.
    Validate { input: PathBuf },
    /// Run the randomized exact identity suites.
    Identities(IdentitiesArgs),
    /// Curvature of a connection form.
    Curvature {
        input: PathBuf,
        #[arg(long)]
        connection: PathBuf,
    },
    /// Gauge transform of a connection, with the curvature covariance check.
    Gauge {
        input: PathBuf,
        #[arg(long)]
        connection: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Cohomology of the deformation complex of a representation.
    Cohomology {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        rank_tolerance: f64,
    },
    /// Local model of the moduli space at a representation.
    Kuranishi(KuranishiArgs),
    /// Brute-force cross-check of the local model.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degree bound for random coefficients.
    #[arg(long, default_value_t = 3)]
    pub max_degree: u32,
    /// Bundle rank for the connection identities (0 skips them).
    #[arg(long, default_value_t = 2)]
    pub bundle_rank: usize,
}

#[derive(Debug, Args)]
pub struct KuranishiArgs {
    pub input: PathBuf,
    /// Radius of the sampling ball (defaults to the contraction radius).
    #[arg(long, value_parser = positive)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples with `‖Φ‖` at most this count as zeros.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub zero_tol: f64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    pub rank_tolerance: f64,
    /// Iteration budget for inverting the Kuranishi map.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub seeds: usize,
    /// Residual tolerance of the root finder.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for the equivalence checks.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub check_tol: f64,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Document {
        path: String,
        #[source]
        source: DocumentError,
    },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } => EXIT_PARSE,
            CliError::Document { source, .. } if source.is_parse_error() => EXIT_PARSE,
            _ => EXIT_INVALID,
        }
    }
}

/// Result of one command: exit status plus both renderings.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display(path),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        path: display(path),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_json(path, &read_text(path)?)
}

fn doc_err(path: &Path) -> impl Fn(DocumentError) -> CliError + '_ {
    move |source| CliError::Document {
        path: display(path),
        source,
    }
}

enum Input {
    Algebroid(AlgebroidDoc),
    Rep(RepDoc),
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let text = read_text(path)?;
    // reparse with the concrete type so that errors keep their positions
    let value: Value = parse_json(path, &text)?;
    if value.get("lie_algebra").is_some() {
        parse_json(path, &text).map(Input::Rep)
    } else {
        parse_json(path, &text).map(Input::Algebroid)
    }
}

fn read_algebroid(path: &Path, cap: u32) -> Result<AlgebroidSpec, CliError> {
    match read_input(path)? {
        Input::Algebroid(doc) => doc.to_spec(cap),
        Input::Rep(doc) => doc.lie_algebra.to_spec(cap),
    }
    .map_err(doc_err(path))
}

fn read_rep(path: &Path, cap: u32) -> Result<RepSpec, CliError> {
    let doc: RepDoc = read_json(path)?;
    doc.to_rep(cap).map_err(doc_err(path))
}

fn matrix_strings(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn form_json(form: &LForm) -> Value {
    Value::Array(
        form.components()
            .iter()
            .map(|(t, m)| json!({"tuple": t, "matrix": matrix_strings(m)}))
            .collect(),
    )
}

fn form_text(out: &mut String, name: &str, form: &LForm) {
    if form.is_zero() {
        let _ = writeln!(out, "{name} = 0");
        return;
    }
    for (t, m) in form.components() {
        let rows: Vec<String> = matrix_strings(m).iter().map(|r| format!("[{}]", r.join(", "))).collect();
        let _ = writeln!(out, "{name}{t:?} = [{}]", rows.join(", "));
    }
}

fn strings(v: &[algebroid_core::Polynomial]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cap = cli.degree_cap;
    match &cli.command {
        Command::Validate { input } => validate(input, cap),
        Command::Identities(args) => identities(args, cap),
        Command::Curvature { input, connection } => curvature_cmd(input, connection, cap),
        Command::Gauge { input, connection, phi } => gauge_cmd(input, connection, phi, cap),
        Command::Cohomology { input, rank_tolerance } => cohomology(input, *rank_tolerance, cap),
        Command::Kuranishi(args) => kuranishi(args, cap),
        Command::Oracle(args) => oracle(args, cap),
    }
}

fn validate(path: &Path, cap: u32) -> Result<Outcome, CliError> {
    let (algebra_doc, rep_doc) = match read_input(path)? {
        Input::Algebroid(doc) => (doc, None),
        Input::Rep(doc) => (doc.lie_algebra.clone(), Some(doc)),
    };
    let spec = algebra_doc.to_spec(cap).map_err(doc_err(path))?;
    let report = spec.validate();
    let mut text = String::new();
    let anchor: Vec<Value> = report
        .anchor_failures
        .iter()
        .map(|f| json!({"i": f.i, "j": f.j, "residual": strings(&f.residual)}))
        .collect();
    let jacobi: Vec<Value> = report
        .jacobi_failures
        .iter()
        .map(|f| json!({"triple": [f.triple.0, f.triple.1, f.triple.2], "residual": strings(&f.residual)}))
        .collect();
    for f in &report.anchor_failures {
        let _ = writeln!(text, "anchor morphism fails on ({}, {}): residual [{}]", f.i, f.j, strings(&f.residual).join(", "));
    }
    for f in &report.jacobi_failures {
        let (i, j, k) = f.triple;
        let _ = writeln!(text, "Jacobi identity fails on ({i}, {j}, {k}): residual [{}]", strings(&f.residual).join(", "));
    }
    let mut valid = report.is_valid();
    let mut json = json!({
        "kind": if rep_doc.is_some() { "representation" } else { "algebroid" },
        "num_vars": spec.num_vars(),
        "rank": spec.rank(),
        "anchor_failures": anchor,
        "jacobi_failures": jacobi,
    });
    if let (Some(doc), true) = (rep_doc, valid) {
        let rep = doc.to_rep(cap).map_err(doc_err(path))?;
        let flat = validate_rep(&rep);
        for f in &flat.failures {
            let _ = writeln!(text, "flatness fails on ({}, {}): ‖[ρ_i, ρ_j] − ρ([e_i, e_j])‖ = {:e}", f.i, f.j, f.norm);
        }
        json["flatness_failures"] = serde_json::to_value(&flat.failures).expect("serializable");
        valid = flat.is_flat();
    }
    json["valid"] = Value::Bool(valid);
    text.push_str(if valid { "valid\n" } else { "invalid\n" });
    Ok(Outcome {
        status: if valid { EXIT_OK } else { EXIT_INVALID },
        text,
        json,
    })
}

fn suite_json(report: &SuiteReport) -> Value {
    Value::Array(
        report
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "identity": o.name,
                    "trials": o.trials,
                    "failures": o.failures,
                    "first_residual": o.first_residual,
                })
            })
            .collect(),
    )
}

fn suite_text(out: &mut String, report: &SuiteReport) {
    for o in &report.outcomes {
        if o.passed() {
            let _ = writeln!(out, "  pass  {}", o.name);
        } else {
            let _ = writeln!(out, "  FAIL  {}  ({}/{} trials)", o.name, o.failures, o.trials);
            if let Some(r) = &o.first_residual {
                let _ = writeln!(out, "        residual: {r}");
            }
        }
    }
}

fn identities(args: &IdentitiesArgs, cap: u32) -> Result<Outcome, CliError> {
    let spec = read_algebroid(&args.input, cap)?;
    let trials = args.trials as usize;
    let mut text = String::new();
    let flat = reference_is_flat(&spec);
    if !flat {
        text.push_str("warning: the anchor is not a bracket morphism; the reference connection is not flat\n");
    }
    let cartan = cartan_identity_suite(&spec, trials, args.seed, args.max_degree);
    let _ = writeln!(
        text,
        "Cartan calculus ({trials} trials, seed {}, degree ≤ {})",
        args.seed, args.max_degree
    );
    suite_text(&mut text, &cartan);
    let _ = writeln!(text, "{}/{} identities pass", cartan.passed_count(), cartan.outcomes.len());
    let mut json = json!({
        "trials": trials,
        "seed": args.seed,
        "max_degree": args.max_degree,
        "reference_flat": flat,
        "cartan": suite_json(&cartan),
        "cartan_passed": cartan.passed_count(),
    });
    let mut ok = cartan.all_passed();
    if args.bundle_rank > 0 {
        let conn = connection_identity_suite(&spec, args.bundle_rank, trials, args.seed, args.max_degree);
        let _ = writeln!(text, "connections (bundle rank {})", args.bundle_rank);
        suite_text(&mut text, &conn);
        let _ = writeln!(text, "{}/{} connection identities pass", conn.passed_count(), conn.outcomes.len());
        json["bundle_rank"] = json!(args.bundle_rank);
        json["connection"] = suite_json(&conn);
        json["connection_passed"] = json!(conn.passed_count());
        ok &= conn.all_passed();
    }
    json["all_passed"] = Value::Bool(ok);
    Ok(Outcome {
        status: if ok { EXIT_OK } else { EXIT_INVALID },
        text,
        json,
    })
}

fn flat_reference(spec: &AlgebroidSpec) -> Result<(), CliError> {
    if reference_is_flat(spec) {
        Ok(())
    } else {
        Err(CliError::Invalid(
            "the anchor is not a bracket morphism; the reference connection is not flat".into(),
        ))
    }
}

fn curvature_cmd(input: &Path, connection: &Path, cap: u32) -> Result<Outcome, CliError> {
    let spec = read_algebroid(input, cap)?;
    flat_reference(&spec)?;
    let conn = read_json::<ConnectionDoc>(connection)?
        .to_connection(&spec, cap)
        .map_err(doc_err(connection))?;
    let r = curvature(&spec, &conn);
    let bianchi = bianchi_check(&spec, &conn).is_zero();
    let mut text = String::new();
    form_text(&mut text, "R", &r);
    let _ = writeln!(text, "flat: {}", r.is_zero());
    let _ = writeln!(text, "Bianchi identity: {}", if bianchi { "holds" } else { "FAILS" });
    Ok(Outcome {
        status: if bianchi { EXIT_OK } else { EXIT_INVALID },
        text,
        json: json!({
            "dim_E": conn.dim_e(),
            "flat": r.is_zero(),
            "curvature": form_json(&r),
            "bianchi_holds": bianchi,
        }),
    })
}

fn gauge_cmd(input: &Path, connection: &Path, phi: &Path, cap: u32) -> Result<Outcome, CliError> {
    let spec = read_algebroid(input, cap)?;
    flat_reference(&spec)?;
    let conn = read_json::<ConnectionDoc>(connection)?
        .to_connection(&spec, cap)
        .map_err(doc_err(connection))?;
    let g = read_json::<GaugeDoc>(phi)?
        .to_gauge(spec.num_vars(), cap)
        .map_err(doc_err(phi))?;
    let transformed = gauge_transform(&spec, &conn, &g)
        .map_err(|e| CliError::Document {
            path: display(phi),
            source: e.into(),
        })?;
    let r = curvature(&spec, &conn);
    let r_new = curvature(&spec, &transformed);
    let expected = r.map_components(|v| &(g.phi_inv() * v) * g.phi());
    let covariant = r_new.sub(&expected).map(|d| d.is_zero()).unwrap_or(false);
    let mut text = String::new();
    form_text(&mut text, "α^φ", transformed.alpha());
    form_text(&mut text, "R(α^φ)", &r_new);
    let _ = writeln!(
        text,
        "curvature covariance R(α^φ) = φ⁻¹R(α)φ: {}",
        if covariant { "holds" } else { "FAILS" }
    );
    Ok(Outcome {
        status: if covariant { EXIT_OK } else { EXIT_INVALID },
        text,
        json: json!({
            "dim_E": conn.dim_e(),
            "alpha": form_json(transformed.alpha()),
            "curvature": form_json(&r_new),
            "covariant": covariant,
        }),
    })
}

fn not_flat(e: algebroid_core::KuranishiError) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Serialize)]
struct CohomologyReport {
    h_dims: Vec<usize>,
    index: i64,
    irreducible: bool,
    commutant_dim: usize,
    cochain_dims: Vec<usize>,
    scalar_field: ScalarField,
    dim_v: usize,
}

fn cohomology(input: &Path, rank_tolerance: f64, cap: u32) -> Result<Outcome, CliError> {
    let rep = read_rep(input, cap)?;
    let params = SolverParams {
        rank_tolerance,
        ..Default::default()
    };
    let report = match rep.scalar_field() {
        ScalarField::Real => cohomology_report(KuranishiModel::<f64>::new(rep, params).map_err(not_flat)?),
        ScalarField::Complex => {
            cohomology_report(KuranishiModel::<Complex<f64>>::new(rep, params).map_err(not_flat)?)
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "cochain dims: {:?}", report.cochain_dims);
    let _ = writeln!(text, "h_dims: {:?}", report.h_dims);
    let _ = writeln!(text, "index: {}", report.index);
    let _ = writeln!(text, "commutant dim: {}", report.commutant_dim);
    let _ = writeln!(text, "irreducible: {}", report.irreducible);
    Ok(Outcome {
        status: EXIT_OK,
        text,
        json: serde_json::to_value(&report).expect("serializable"),
    })
}

fn cohomology_report<S: Scalar>(model: KuranishiModel<S>) -> CohomologyReport {
    CohomologyReport {
        h_dims: model.h_dims(),
        index: model.index(),
        irreducible: model.is_irreducible(),
        commutant_dim: model.commutant_dim(),
        cochain_dims: model.hodge().dims.clone(),
        scalar_field: S::FIELD,
        dim_v: model.rep().dim_v(),
    }
}

/// Stable line-ordered rendering of a moduli report.
pub fn report_text(r: &ModuliReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "h_dims: {:?}", r.h_dims);
    let _ = writeln!(t, "index: {}", r.index);
    let _ = writeln!(t, "irreducible: {}", r.irreducible);
    let h2 = r.h_dims.get(2).copied().unwrap_or(0);
    let _ = writeln!(t, "smooth: {} (dim H^2 = {h2})", r.smooth);
    if let Some(d) = r.expected_local_dim {
        let _ = writeln!(t, "expected local dimension: {d}");
    }
    let _ = writeln!(t, "scalar field: {}", r.scalar_field);
    let _ = writeln!(t, "dim V: {}", r.dim_v);
    let _ = writeln!(t, "cochain dims: {:?}", r.cochain_dims);
    let _ = writeln!(t, "commutant dim: {}", r.commutant_dim);
    if r.obstruction_identically_zero {
        let _ = writeln!(t, "obstruction map: identically zero");
    } else if r.quadratic_form.is_empty() {
        let _ = writeln!(t, "obstruction map: not identically zero; quadratic part vanishes");
    } else {
        let _ = writeln!(t, "obstruction map: quadratic, {} nonzero coefficients", r.quadratic_form.len());
    }
    for q in &r.quadratic_form {
        let v = match q.value {
            algebroid_core::kuranishi::Num::Real(x) => format!("{x}"),
            algebroid_core::kuranishi::Num::Complex([re, im]) => format!("{re}{im:+}i"),
        };
        let _ = writeln!(t, "  ½H₂[h{}, h{}] · k{} = {v}", q.a, q.b, q.c);
    }
    let s = &r.sampling;
    let _ = writeln!(t, "samples: {} (radius {}, zero tolerance {:e})", s.samples, s.radius, s.zero_tol);
    let _ = writeln!(t, "unobstructed samples: {}", s.unobstructed);
    let _ = writeln!(t, "failed samples: {}", s.failures);
    if let Some(f) = s.zero_fraction {
        let _ = writeln!(t, "zero fraction: {f}");
    }
    if let Some(m) = s.max_obstruction_norm {
        let _ = writeln!(t, "max obstruction norm: {m:e}");
    }
    let d = &r.solver;
    let _ = writeln!(
        t,
        "solver: radius {} (default {}), ‖dG‖ = {}, bracket bound {}, fixed-point iterations ≤ {}",
        d.radius, d.default_radius, d.dg_norm, d.bracket_bound, d.max_fixed_point_iterations
    );
    for n in &r.notes {
        let _ = writeln!(t, "note: {n}");
    }
    t
}

fn kuranishi(args: &KuranishiArgs, cap: u32) -> Result<Outcome, CliError> {
    let rep = read_rep(&args.input, cap)?;
    let params = SolverParams {
        rank_tolerance: args.rank_tolerance,
        max_iter: args.max_iter as usize,
        ..Default::default()
    };
    let report = match rep.scalar_field() {
        ScalarField::Real => {
            let model = KuranishiModel::<f64>::new(rep, params).map_err(not_flat)?;
            local_model_report(&model, args.samples, args.radius, args.seed, args.zero_tol)
        }
        ScalarField::Complex => {
            let model = KuranishiModel::<Complex<f64>>::new(rep, params).map_err(not_flat)?;
            local_model_report(&model, args.samples, args.radius, args.seed, args.zero_tol)
        }
    };
    Ok(Outcome {
        status: if report.sampling.failures > 0 { EXIT_NO_CONVERGENCE } else { EXIT_OK },
        text: report_text(&report),
        json: serde_json::to_value(&report).expect("serializable"),
    })
}

#[derive(Serialize)]
struct OracleReport {
    seeds: usize,
    converged: usize,
    in_ball: usize,
    max_solution_norm: Option<f64>,
    /// Largest `‖Φ(K(β))‖` over the in-ball solutions.
    max_phi_of_k: Option<f64>,
    zeros_sampled: usize,
    /// Largest Maurer–Cartan residual of `F(γ)` over sampled zeros of `Φ`.
    max_mc_of_f: Option<f64>,
    radius: f64,
    check_tol: f64,
    equivalent: bool,
}

fn oracle_report<S: Scalar>(model: &KuranishiModel<S>, args: &OracleArgs) -> OracleReport {
    let params = OracleParams {
        seeds: args.seeds,
        tol: args.tol,
        seed: args.seed,
        ..Default::default()
    };
    let radius = model.radius();
    let sols = mc_slice_solve_bruteforce(model, &params);
    let in_ball: Vec<_> = sols.iter().filter(|b| b.norm() < radius).collect();
    let phi_norms: Vec<f64> = in_ball
        .iter()
        .map(|b| {
            model
                .obstruction(&model.kuranishi_map(b))
                .map(|p| p.norm())
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let zeros = sample_obstruction_zeros(model, args.seeds, &params);
    let mc: Vec<f64> = zeros
        .iter()
        .map(|g| {
            model
                .kuranishi_invert(g)
                .map(|b| model.mc_residual(&b).norm())
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let max = |v: &[f64]| v.iter().copied().reduce(f64::max);
    let equivalent = phi_norms.iter().chain(&mc).all(|&x| x <= args.check_tol);
    OracleReport {
        seeds: args.seeds,
        converged: sols.len(),
        in_ball: in_ball.len(),
        max_solution_norm: sols.iter().map(|b| b.norm()).reduce(f64::max),
        max_phi_of_k: max(&phi_norms),
        zeros_sampled: zeros.len(),
        max_mc_of_f: max(&mc),
        radius,
        check_tol: args.check_tol,
        equivalent,
    }
}

fn oracle(args: &OracleArgs, cap: u32) -> Result<Outcome, CliError> {
    let rep = read_rep(&args.input, cap)?;
    let params = SolverParams::default();
    let r = match rep.scalar_field() {
        ScalarField::Real => oracle_report(&KuranishiModel::<f64>::new(rep, params).map_err(not_flat)?, args),
        ScalarField::Complex => {
            oracle_report(&KuranishiModel::<Complex<f64>>::new(rep, params).map_err(not_flat)?, args)
        }
    };
    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:e}"));
    let mut text = String::new();
    let _ = writeln!(text, "slice MC solutions: {}/{} seeds converged, {} inside radius {}", r.converged, r.seeds, r.in_ball, r.radius);
    let _ = writeln!(text, "max solution norm: {}", opt(r.max_solution_norm));
    let _ = writeln!(text, "max ‖Φ(K(β))‖: {}", opt(r.max_phi_of_k));
    let _ = writeln!(text, "sampled zeros of Φ: {}", r.zeros_sampled);
    let _ = writeln!(text, "max MC residual of F(γ): {}", opt(r.max_mc_of_f));
    let _ = writeln!(text, "equivalence within {:e}: {}", r.check_tol, r.equivalent);
    let status = if r.converged == 0 && args.seeds > 0 {
        EXIT_NO_CONVERGENCE
    } else if r.equivalent {
        EXIT_OK
    } else {
        EXIT_INVALID
    };
    Ok(Outcome {
        status,
        text,
        json: serde_json::to_value(&r).expect("serializable"),
    })
}
