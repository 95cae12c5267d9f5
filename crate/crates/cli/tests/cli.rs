use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gallery(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "gallery", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn algebroid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algebroid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("algebroid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_poisson() {
    let o = algebroid(&["validate", &gallery("poisson_x0.json")]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o).trim(), "valid");
}

#[test]
fn identities_on_the_plane() {
    let o = algebroid(&["identities", &gallery("tangent2.json"), "--trials", "20", "--seed", "7"]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("9/9 identities pass"), "{}", stdout(&o));
}

#[test]
fn sl2_report_leads_with_the_summary() {
    let o = algebroid(&["kuranishi", &gallery("sl2_standard.json"), "--format", "json"]);
    assert_eq!(status(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obj = v.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().take(5).map(String::as_str).collect();
    assert_eq!(keys, ["h_dims", "index", "irreducible", "smooth", "expected_local_dim"]);
    assert_eq!(v["h_dims"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(v["index"], 0);
    assert_eq!(v["irreducible"], true);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["expected_local_dim"], 0);
}

#[test]
fn text_reports() {
    let o = algebroid(&["kuranishi", &gallery("sl2_standard.json")]);
    assert!(stdout(&o).lines().any(|l| l == "smooth: true (dim H^2 = 0)"));
    let o = algebroid(&["kuranishi", &gallery("abelian_line.json")]);
    assert!(stdout(&o).lines().any(|l| l == "obstruction map: identically zero"));
}

#[test]
fn empty_sampling_omits_the_fraction() {
    let o = algebroid(&["kuranishi", &gallery("abelian_line.json"), "--samples", "0", "--format", "json"]);
    assert_eq!(status(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["sampling"].get("zero_fraction").is_none());
    let o = algebroid(&["kuranishi", &gallery("abelian_line.json"), "--samples", "0"]);
    assert!(!stdout(&o).contains("zero fraction"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["kuranishi", &gallery("abelian_commuting.json"), "--samples", "64", "--seed", "5", "--format", "json"];
    assert_eq!(algebroid(&args).stdout, algebroid(&args).stdout);
    let args = ["identities", &gallery("nijenhuis.json"), "--trials", "8", "--seed", "3", "--format", "json"];
    assert_eq!(algebroid(&args).stdout, algebroid(&args).stdout);
}

#[test]
fn broken_jacobi_is_rejected() {
    let o = algebroid(&["validate", &gallery("broken_jacobi.json")]);
    assert_eq!(status(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("Jacobi identity fails on (0, 1, 2): residual [0, 0, 1]"), "{out}");
    let o = algebroid(&["identities", &gallery("broken_jacobi.json"), "--trials", "20"]);
    assert_eq!(status(&o), 1);
}

#[test]
fn parse_errors_exit_with_two() {
    let o = algebroid(&["validate", "/definitely/not/here.json"]);
    assert_eq!(status(&o), 2);

    let trailing = scratch("trailing.json", "{\"num_vars\": 1, \"rank\": 1,\n \"anchor\": [[\"x0\"]],}");
    let o = algebroid(&["validate", &trailing]);
    assert_eq!(status(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":2:"), "position missing: {err}");

    let bad_poly = scratch("bad_poly.json", r#"{"num_vars": 1, "rank": 1, "anchor": [["x0 +"]]}"#);
    let o = algebroid(&["validate", &bad_poly]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("anchor[0][0]"));

    let too_big = scratch("too_big.json", r#"{"num_vars": 1, "rank": 1, "anchor": [["x0^5"]]}"#);
    assert_eq!(status(&algebroid(&["validate", &too_big])), 0);
    assert_eq!(status(&algebroid(&["validate", &too_big, "--degree-cap", "4"])), 2);

    assert_eq!(status(&algebroid(&["identities", &gallery("tangent2.json"), "--trials", "0"])), 2);
    assert_eq!(status(&algebroid(&["kuranishi", &gallery("sl2_standard.json"), "--zero-tol", "-1"])), 2);
}

#[test]
fn non_flat_representation_exits_with_one() {
    let rep = scratch(
        "nonflat.json",
        r#"{"lie_algebra": {"num_vars": 0, "rank": 2, "anchor": [[], []]},
            "dim_V": 2,
            "rho": [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]]}"#,
    );
    let o = algebroid(&["validate", &rep]);
    assert_eq!(status(&o), 1);
    assert!(stdout(&o).contains("flatness fails on (0, 1)"));
    assert_eq!(status(&algebroid(&["cohomology", &rep])), 1);
    assert_eq!(status(&algebroid(&["kuranishi", &rep])), 1);
}

#[test]
fn non_convergence_exits_with_three() {
    let o = algebroid(&["kuranishi", &gallery("abelian_commuting.json"), "--max-iter", "1", "--samples", "10"]);
    assert_eq!(status(&o), 3);
    assert!(stdout(&o).contains("failed samples: "));
}

#[test]
fn curvature_and_gauge() {
    let conn = gallery("aff1_connection.json");
    let o = algebroid(&["curvature", &gallery("aff1_action.json"), "--connection", &conn]);
    assert_eq!(status(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("R[0, 1] = [[1, -x0 - 1], [0, 0]]"), "{out}");
    assert!(out.contains("Bianchi identity: holds"));
    let o = algebroid(&[
        "gauge",
        &gallery("aff1_action.json"),
        "--connection",
        &conn,
        "--phi",
        &gallery("unipotent_gauge.json"),
    ]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("φ⁻¹R(α)φ: holds"));

    let not_inverse = scratch("not_inverse.json", r#"{"phi": [["1", "x0"], ["0", "1"]], "phi_inv": [["1", "x0"], ["0", "1"]]}"#);
    let o = algebroid(&["gauge", &gallery("aff1_action.json"), "--connection", &conn, "--phi", &not_inverse]);
    assert_eq!(status(&o), 1);
}

#[test]
fn oracle_agrees_with_the_model() {
    let o = algebroid(&["oracle", &gallery("abelian_commuting.json"), "--seeds", "16", "--format", "json"]);
    assert_eq!(status(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], true);
    let o = algebroid(&["oracle", &gallery("sl2_standard.json"), "--seeds", "16", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_solution_norm"].as_f64().unwrap() <= 1e-6);
}

/// Numbers agree to a relative 1e-9; everything else exactly.
fn same_json(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-3)
        }
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same_json(p, q)),
        (Value::Object(x), Value::Object(y)) => {
            x.keys().eq(y.keys()) && x.iter().zip(y.values()).all(|((_, p), q)| same_json(p, q))
        }
        _ => a == b,
    }
}

#[test]
fn gallery_reproduces_golden_reports() {
    let golden_dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "gallery", "golden"].iter().collect();
    let mut checked = 0;
    for entry in std::fs::read_dir(&golden_dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let mut parts = name.splitn(3, '.');
        let (example, command, ext) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
        let input = gallery(&format!("{example}.json"));
        let mut args: Vec<String> = vec![command.into(), input];
        match command {
            "identities" => args.extend(["--trials", "20", "--seed", "7", "--max-degree", "4"].map(String::from)),
            "kuranishi" => args.extend(["--samples", "100", "--seed", "0"].map(String::from)),
            "curvature" => args.extend(["--connection".into(), gallery("aff1_connection.json")]),
            "gauge" => args.extend([
                "--connection".into(),
                gallery("aff1_connection.json"),
                "--phi".into(),
                gallery("unipotent_gauge.json"),
            ]),
            _ => {}
        }
        if ext == "json" {
            args.extend(["--format", "json"].map(String::from));
        }
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = stdout(&algebroid(&argv));
        let expected = std::fs::read_to_string(&path).unwrap();
        if ext == "json" {
            let (a, b): (Value, Value) = (serde_json::from_str(&out).unwrap(), serde_json::from_str(&expected).unwrap());
            assert!(same_json(&a, &b), "{name} drifted:\n{out}");
        } else {
            assert_eq!(out, expected, "{name} drifted");
        }
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} golden files");
}

#[test]
fn every_gallery_example_validates() {
    for name in [
        "tangent2",
        "poisson_x0",
        "nijenhuis",
        "aff1_action",
        "heisenberg",
        "sl2_standard",
        "abelian_commuting",
        "abelian_line",
    ] {
        let o = algebroid(&["validate", &gallery(&format!("{name}.json"))]);
        assert_eq!(status(&o), 0, "{name}");
    }
}
