//! The shipped gallery files agree with the library constructions.

use algebroid_core::algebroid::{construct_example, ExampleKind};
use algebroid_core::documents::{AlgebroidDoc, DEFAULT_DEGREE_CAP};
use algebroid_core::exactpoly::{int, parse_polynomial, PolyMatrix};
use algebroid_core::AlgebroidSpec;

fn gallery(name: &str) -> AlgebroidSpec {
    let path = format!("{}/../../gallery/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let doc: AlgebroidDoc = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    doc.to_spec(DEFAULT_DEGREE_CAP).unwrap()
}

fn p(s: &str, n: usize) -> algebroid_core::Polynomial {
    parse_polynomial(s, n).unwrap()
}

#[test]
fn tangent_plane() {
    let built = construct_example(&ExampleKind::Tangent { num_vars: 2 }).unwrap();
    assert_eq!(gallery("tangent2"), built);
}

#[test]
fn poisson_bivector() {
    let built = construct_example(&ExampleKind::Poisson {
        num_vars: 2,
        bivector: vec![((0, 1), p("x0", 2))],
    })
    .unwrap();
    assert_eq!(gallery("poisson_x0"), built);
}

#[test]
fn nijenhuis_deformation() {
    let base = construct_example(&ExampleKind::Tangent { num_vars: 2 }).unwrap();
    let tensor = PolyMatrix::from_rows(vec![vec![p("1", 2), p("0", 2)], vec![p("x1", 2), p("1", 2)]], 2);
    let built = construct_example(&ExampleKind::Nijenhuis { base, tensor }).unwrap();
    assert_eq!(gallery("nijenhuis"), built);
}

#[test]
fn affine_action() {
    let algebra = construct_example(&ExampleKind::LieAlgebra {
        rank: 2,
        brackets: vec![((0, 1), vec![int(1), int(0)])],
    })
    .unwrap();
    let built = construct_example(&ExampleKind::Action {
        algebra,
        fields: vec![vec![p("1", 1)], vec![p("x0", 1)]],
    })
    .unwrap();
    assert_eq!(gallery("aff1_action"), built);
}

#[test]
fn every_algebroid_round_trips_through_json() {
    for name in ["tangent2", "poisson_x0", "nijenhuis", "aff1_action", "broken_jacobi"] {
        let spec = gallery(name);
        let text = serde_json::to_string(&AlgebroidDoc::from_spec(&spec)).unwrap();
        let back: AlgebroidDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spec(DEFAULT_DEGREE_CAP).unwrap(), spec, "{name}");
    }
}
