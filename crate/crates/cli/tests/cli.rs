use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const X1X2: &str =
    r#"{"kind":"qpoly","n":2,"q":{"re":0.5,"im":0},"terms":[{"k":[1,1],"c":{"re":1,"im":0}}]}"#;

fn qdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdisk"))
        .args(args)
        .output()
        .expect("spawn qdisk")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn norm_of_x1x2_polydisk_is_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.json", X1X2);
    let v = json(&qdisk(&[
        "norm",
        "--in",
        f.to_str().unwrap(),
        "--family",
        "polydisk",
        "--rho",
        "1",
    ]));
    assert!((v["norm"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn radius_of_unimodular_coordinates_is_sqrt_two() {
    let v = json(&qdisk(&[
        "radius", "--tuple", "coords", "--n", "2", "--q", "1", "--family", "polydisk", "--rho",
        "1", "--depth", "6", "--p", "2",
    ]));
    let est = v["estimates"].as_array().unwrap();
    assert_eq!(est.len(), 6);
    for e in est {
        assert!((e.as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn radius_reports_contractivity() {
    let v = json(&qdisk(&[
        "radius",
        "--tuple",
        "free-coords",
        "--n",
        "2",
        "--family",
        "free-polydisk",
        "--rho",
        "0.5",
        "--tau",
        "2",
        "--depth",
        "8",
        "--p",
        "inf",
        "--r",
        "0.8",
    ]));
    assert_eq!(v["contractive"]["verdict"], "fail");
}

#[test]
fn mul_and_normal_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"kind":"free","n":2,"terms":[{"alpha":[2],"c":{"re":1,"im":0}}]}"#,
    );
    let b = write(
        dir.path(),
        "b.json",
        r#"{"kind":"free","n":2,"terms":[{"alpha":[1],"c":{"re":1,"im":0}}]}"#,
    );
    let out = qdisk(&[
        "mul",
        "--in",
        a.to_str().unwrap(),
        "--in",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let prod = write(
        dir.path(),
        "ab.json",
        std::str::from_utf8(&out.stdout).unwrap(),
    );
    let v = json(&qdisk(&[
        "normal-order",
        "--in",
        prod.to_str().unwrap(),
        "--q",
        "0.5",
    ]));
    // ζ2ζ1 normal-orders to q^{-1} x1x2.
    assert_eq!(v["kind"], "qpoly");
    assert_eq!(v["terms"][0]["k"], serde_json::json!([1, 1]));
    assert!((v["terms"][0]["c"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn star_product_of_generators() {
    let dir = tempfile::tempdir().unwrap();
    let x2 = write(
        dir.path(),
        "x2.json",
        r#"{"kind":"hseries","n":2,"order":2,"terms":[{"p":0,"k":[0,1],"c":{"re":1,"im":0}}]}"#,
    );
    let x1 = write(
        dir.path(),
        "x1.json",
        r#"{"kind":"hseries","n":2,"order":2,"terms":[{"p":0,"k":[1,0],"c":{"re":1,"im":0}}]}"#,
    );
    let v = json(&qdisk(&[
        "star",
        "--in",
        x2.to_str().unwrap(),
        "--in",
        x1.to_str().unwrap(),
        "--order",
        "2",
    ]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn fock_norm_bounds_are_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.json", X1X2);
    let v = json(&qdisk(&[
        "fock-norm",
        "--in",
        f.to_str().unwrap(),
        "--rho",
        "1",
        "--depth",
        "6",
    ]));
    let (lo, hi, vac) = (
        v["lower"].as_f64().unwrap(),
        v["upper"].as_f64().unwrap(),
        v["vacuum"].as_f64().unwrap(),
    );
    assert!(vac <= lo * (1.0 + 1e-12) && lo <= hi * (1.0 + 1e-12), "{v}");
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "a.json",
        r#"{"kind":"laurent","n":2,"terms":[{"k":[1,1],"p":-1,"c":{"re":1,"im":0}}]}"#,
    );
    let csv = dir.path().join("field.csv");
    let v = json(&qdisk(&[
        "scan",
        "--in",
        f.to_str().unwrap(),
        "--path",
        "circle:0.5",
        "--samples",
        "16",
        "--family",
        "polydisk",
        "--rho",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(v["rows"], 16);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q_re,q_im,norm"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(qdisk(&["verify", "no-such"]).status.code(), Some(2));
    assert_eq!(qdisk(&["norm", "--rho", "1"]).status.code(), Some(2));
    assert_eq!(qdisk(&["verify", "eq-6-10"]).status.code(), Some(0));
    assert_eq!(
        qdisk(&["verify", "eq-6-10", "--perturb", "polydisk-weight"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"qpoly","n":2,"q":{"re":0.5,"im":0},"terms":[{"k":[1],"c":{"re":1,"im":0}}]}"#,
    );
    let out = qdisk(&[
        "norm",
        "--in",
        bad.to_str().unwrap(),
        "--family",
        "polydisk",
        "--rho",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("terms[0].k"));
}

#[test]
fn verify_json_is_reproducible() {
    let a = json(&qdisk(&["verify", "submult-all", "--json", "--seed", "9"]));
    let b = json(&qdisk(&["verify", "submult-all", "--json", "--seed", "9"]));
    let worst = |v: &Value| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["worst"].clone())
            .collect::<Vec<_>>()
    };
    assert_eq!(worst(&a), worst(&b));
    assert_eq!(a["passed"], true);
}
