use algebroid_core::cartan::{
    cartan_identity_suite, curvature, gauge_transform, graded_bracket, random_form, random_gauge_map,
    random_section, wedge, ConnectionForm,
};
use algebroid_core::documents::{AlgebroidDoc, RepDoc, DEFAULT_DEGREE_CAP};
use algebroid_core::exactpoly::{int, Polynomial, Rational};
use algebroid_core::kuranishi::{KuranishiModel, QMatrix, RepSpec, SolverParams};
use algebroid_core::AlgebroidSpec;
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gallery(name: &str) -> String {
    let path = format!("{}/../../gallery/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn spec(name: &str) -> AlgebroidSpec {
    serde_json::from_str::<AlgebroidDoc>(&gallery(name))
        .unwrap()
        .to_spec(DEFAULT_DEGREE_CAP)
        .unwrap()
}

fn rep(name: &str) -> RepSpec {
    serde_json::from_str::<RepDoc>(&gallery(name))
        .unwrap()
        .to_rep(DEFAULT_DEGREE_CAP)
        .unwrap()
}

fn polys(seed: u64, n: usize) -> [Polynomial; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| Polynomial::random(&mut rng, n, 3, 4))
}

const ALGEBROIDS: [&str; 4] = ["tangent2", "poisson_x0", "nijenhuis", "aff1_action"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>(), n in 0usize..4) {
        let [a, b, c] = polys(seed, n);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partials_obey_leibniz(seed in any::<u64>(), n in 1usize..4) {
        let [a, b, _] = polys(seed, n);
        for i in 0..n {
            let lhs = (&a * &b).partial(i).unwrap();
            let rhs = &(&a.partial(i).unwrap() * &b) + &(&a * &b.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn section_bracket_obeys_leibniz(seed in any::<u64>(), which in 0usize..4) {
        let spec = spec(ALGEBROIDS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = random_section(&mut rng, &spec, 2);
        let eta = random_section(&mut rng, &spec, 2);
        let f = Polynomial::random(&mut rng, spec.num_vars(), 2, 3);
        let lhs = spec.section_bracket(&xi, &eta.scale(&f)).unwrap();
        let rhs = spec
            .section_bracket(&xi, &eta)
            .unwrap()
            .scale(&f)
            .add(&eta.scale(&spec.anchor_apply(&xi, &f).unwrap()));
        prop_assert_eq!(lhs, rhs);
        // antisymmetry
        let swapped = spec.section_bracket(&eta, &xi).unwrap();
        prop_assert!(spec.section_bracket(&xi, &eta).unwrap().add(&swapped).is_zero());
    }

    #[test]
    fn graded_bracket_jacobi(seed in any::<u64>(), p in 0usize..3, q in 0usize..3, r in 0usize..2) {
        let spec = spec("nijenhuis");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(&mut rng, &spec, p, (2, 2), 1);
        let b = random_form(&mut rng, &spec, q, (2, 2), 1);
        let c = random_form(&mut rng, &spec, r, (2, 2), 1);
        let br = |x: &_, y: &_| graded_bracket(x, y).unwrap();
        // [a,[b,c]] = [[a,b],c] + (-1)^{pq} [b,[a,c]]
        let lhs = br(&a, &br(&b, &c));
        let mut rhs = br(&br(&a, &b), &c);
        let tail = br(&b, &br(&a, &c));
        rhs = if (p * q) % 2 == 0 { rhs.add(&tail) } else { rhs.sub(&tail) }.unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
        // graded antisymmetry
        let ab = br(&a, &b);
        let ba = br(&b, &a);
        let sum = if (p * q) % 2 == 0 { ab.add(&ba) } else { ab.sub(&ba) }.unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>(), which in 0usize..4) {
        let spec = spec(ALGEBROIDS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(&mut rng, &spec, 1, (2, 2), 1);
        let b = random_form(&mut rng, &spec, 0, (2, 2), 1);
        let c = random_form(&mut rng, &spec, 1, (2, 2), 1);
        let w = |x: &_, y: &_| wedge(x, y).unwrap();
        prop_assert_eq!(w(&w(&a, &b), &c), w(&a, &w(&b, &c)));
    }

    #[test]
    fn curvature_is_gauge_covariant(seed in any::<u64>(), which in 0usize..4) {
        let spec = spec(ALGEBROIDS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = ConnectionForm::new(random_form(&mut rng, &spec, 1, (2, 2), 1)).unwrap();
        let g = random_gauge_map(&mut rng, 2, spec.num_vars(), 1);
        let moved = gauge_transform(&spec, &alpha, &g).unwrap();
        let expected = curvature(&spec, &alpha).map_components(|v| &(g.phi_inv() * v) * g.phi());
        prop_assert!(curvature(&spec, &moved).sub(&expected).unwrap().is_zero());
    }

    #[test]
    fn cohomology_is_conjugation_invariant(seed in any::<u64>(), which in 0usize..3) {
        let base = rep(["sl2_standard", "heisenberg_gl2", "abelian_commuting"][which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, g_inv) = loop {
            let rows: Vec<Vec<Rational>> = (0..2)
                .map(|_| (0..2).map(|_| int(rng.random_range(-4..=4))).collect())
                .collect();
            let g = QMatrix::from_real(rows).unwrap();
            if let Some(inv) = g.inverse() {
                break (g, inv);
            }
        };
        let a = KuranishiModel::<f64>::new(base.clone(), SolverParams::default()).unwrap();
        let b = KuranishiModel::<f64>::new(base.conjugate(&g, &g_inv).unwrap(), SolverParams::default()).unwrap();
        prop_assert_eq!(a.h_dims(), b.h_dims());
        prop_assert_eq!(a.index(), b.index());
        prop_assert_eq!(a.is_irreducible(), b.is_irreducible());
    }

    #[test]
    fn kuranishi_inverse_round_trips(seed in any::<u64>(), which in 0usize..3) {
        let model = KuranishiModel::<f64>::new(
            rep(["sl2_standard", "heisenberg_gl2", "abelian_commuting"][which]),
            SolverParams::default(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = DVector::from_fn(model.dim(1), |_, _| rng.random_range(-1.0..1.0));
        let beta = v.normalize() * (0.5 * model.radius());
        let back = model.kuranishi_invert(&model.kuranishi_map(&beta)).unwrap();
        prop_assert!((back - &beta).norm() <= 1e-9);
    }
}

#[test]
fn index_is_the_alternating_sum_of_cohomology() {
    for name in ["heisenberg", "heisenberg_gl2", "sl2_standard", "abelian_commuting", "abelian_line"] {
        let m = KuranishiModel::<f64>::new(rep(name), SolverParams::default()).unwrap();
        let alt: i64 = m
            .h_dims()
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        assert_eq!(m.index(), alt, "{name}");
    }
}

#[test]
fn identity_suite_is_deterministic() {
    let s = spec("poisson_x0");
    assert_eq!(cartan_identity_suite(&s, 6, 42, 3), cartan_identity_suite(&s, 6, 42, 3));
}
