use std::hint::black_box;

use algebroid_core::cartan::{cartan_identity_suite, d_l, random_form};
use algebroid_core::documents::{AlgebroidDoc, RepDoc, DEFAULT_DEGREE_CAP};
use algebroid_core::kuranishi::{build_complex, local_model_report, HodgeData, KuranishiModel, SolverParams};
use algebroid_core::Polynomial;
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gallery(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../gallery/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn polynomials(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = Polynomial::random(&mut rng, 3, 6, 12);
    let b = Polynomial::random(&mut rng, 3, 6, 12);
    c.bench_function("poly_mul_3vars_deg6", |bench| bench.iter(|| black_box(&a) * black_box(&b)));
}

fn calculus(c: &mut Criterion) {
    let spec = serde_json::from_str::<AlgebroidDoc>(&gallery("nijenhuis"))
        .unwrap()
        .to_spec(DEFAULT_DEGREE_CAP)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let form = random_form(&mut rng, &spec, 1, (2, 2), 3);
    c.bench_function("d_l_nijenhuis_1form", |bench| bench.iter(|| d_l(&spec, black_box(&form))));
    c.bench_function("cartan_suite_poisson_4trials", |bench| {
        let poisson = serde_json::from_str::<AlgebroidDoc>(&gallery("poisson_x0"))
            .unwrap()
            .to_spec(DEFAULT_DEGREE_CAP)
            .unwrap();
        bench.iter(|| cartan_identity_suite(&poisson, 4, 7, 3))
    });
}

fn moduli(c: &mut Criterion) {
    let rep = serde_json::from_str::<RepDoc>(&gallery("heisenberg_gl2"))
        .unwrap()
        .to_rep(DEFAULT_DEGREE_CAP)
        .unwrap();
    let complex = build_complex(&rep).unwrap();
    c.bench_function("hodge_heisenberg_gl2", |bench| bench.iter(|| HodgeData::<f64>::new(&complex, 1e-9)));
    let model = KuranishiModel::<f64>::new(rep, SolverParams::default()).unwrap();
    c.bench_function("report_heisenberg_gl2_100samples", |bench| {
        bench.iter(|| local_model_report(&model, 100, None, 0, 1e-10))
    });
}

criterion_group!(benches, polynomials, calculus, moduli);
criterion_main!(benches);
