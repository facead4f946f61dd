use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use complex_kriging::cli::ResultDocument;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn ckrige(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckrige"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn document(out: &Output) -> ResultDocument {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn real(doc: &ResultDocument, key: &str) -> f64 {
    match &doc.outputs[key] {
        complex_kriging::cli::Quantity::Real { value, .. } => *value,
        other => panic!("{key} is not real: {other:?}"),
    }
}

#[test]
fn golden_complex_mean() {
    let example = data("example.csv");
    let out = ckrige(&["complex-mean", example.to_str().unwrap(), "--json"]);
    let golden = std::fs::read(data("example_complex_mean.json")).unwrap();
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&golden)
    );
    assert!(out.stderr.is_empty());
}

#[test]
fn complex_mean_renderings() {
    let example = data("example.csv");
    let doc = document(&ckrige(&[
        "complex-mean",
        example.to_str().unwrap(),
        "--json",
    ]));
    let json = serde_json::to_value(&doc).unwrap();
    let out = &json["outputs"];
    assert_eq!(out["mean_plus"]["rendered"]["re"], "6.1");
    assert_eq!(out["mean_plus"]["rendered"]["im"], "-0.2");
    assert_eq!(out["mean_minus"]["rendered"]["im"], "0.2");
    assert_eq!(out["real_standard_error"]["rendered"], "0.5");
    assert_eq!(out["imaginary_standard_error"]["rendered"], "0.2");
}

#[test]
fn complex_mean_single_branch() {
    let example = data("example.csv");
    let doc = document(&ckrige(&[
        "complex-mean",
        example.to_str().unwrap(),
        "--branch",
        "minus",
        "--json",
    ]));
    assert!(doc.outputs.contains_key("mean_minus"));
    assert!(!doc.outputs.contains_key("mean_plus"));
    assert_eq!(doc.inputs.branch.as_deref(), Some("minus"));
}

#[test]
fn constant_observations() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "c.csv", "x,v\n1,4\n2,4\n5,4\n");
    let doc = document(&ckrige(&["complex-mean", &f, "--json"]));
    assert_eq!(real(&doc, "real_standard_error"), 0.0);
    assert_eq!(real(&doc, "imaginary_standard_error"), 0.0);
}

#[test]
fn fit_reports_beta() {
    let example = data("example.csv");
    let doc = document(&ckrige(&[
        "fit",
        example.to_str().unwrap(),
        "--basis",
        "constant",
        "--json",
    ]));
    assert!((real(&doc, "beta_1") - 6.145_454_545_454_545).abs() < 1e-12);
    let json = serde_json::to_value(&doc).unwrap();
    assert_eq!(json["outputs"]["beta_1"]["rendered"], "6.1");

    let doc = document(&ckrige(&[
        "fit",
        example.to_str().unwrap(),
        "--at",
        "4.6",
        "--json",
    ]));
    assert!((real(&doc, "beta_1") - 6.512_360_663_859_301).abs() < 1e-12);
    assert!((real(&doc, "beta_2") + 0.079_762_199_653_207_83).abs() < 1e-13);
    assert!((real(&doc, "variance_factor") - 1.0 / 11.0).abs() < 1e-15);
}

#[test]
fn fit_with_lambda_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_tmp(&dir, "s.csv", "1,1\n2,3\n3,2\n");
    let ident = write_tmp(&dir, "i.txt", "1 0 0\n0 1 0\n0 0 1\n");
    let a = document(&ckrige(&["fit", &f, "--lambda", &ident, "--json"]));
    let b = document(&ckrige(&["fit", &f, "--json"]));
    assert!((real(&a, "beta_2") - real(&b, "beta_2")).abs() < 1e-14);

    let corr = write_tmp(&dir, "c.txt", "1 0.3 0\n0.3 1 0.3\n0 0.3 1\n");
    document(&ckrige(&["fit", &f, "--lambda", &corr, "--json"]));

    let short = write_tmp(&dir, "short.txt", "1 0\n0 1\n");
    assert_eq!(
        ckrige(&["fit", &f, "--lambda", &short]).status.code(),
        Some(2)
    );
    let asym = write_tmp(&dir, "asym.txt", "1 0.3 0\n0 1 0\n0 0 1\n");
    assert_eq!(
        ckrige(&["fit", &f, "--lambda", &asym]).status.code(),
        Some(2)
    );
    let indefinite = write_tmp(&dir, "indef.txt", "1 0.9 -0.9\n0.9 1 0.9\n-0.9 0.9 1\n");
    assert_eq!(
        ckrige(&["fit", &f, "--lambda", &indefinite]).status.code(),
        Some(3)
    );
}

#[test]
fn zero_points_example_and_indices() {
    let example = data("example.csv");
    let doc = document(&ckrige(&[
        "zero-points",
        example.to_str().unwrap(),
        "--json",
    ]));
    assert!((real(&doc, "m_n") - 4.6).abs() < 1e-14);
    assert!((real(&doc, "sigma_n") - 2.709_243_436_828_813).abs() < 1e-14);

    let dir = tempfile::tempdir().unwrap();
    let rows: String = (1..=11).map(|i| format!("{i},{}\n", i * i % 7)).collect();
    let f = write_tmp(&dir, "idx.csv", &rows);
    let doc = document(&ckrige(&["zero-points", &f, "--json"]));
    assert_eq!(real(&doc, "m_n"), 6.0);
    assert!((real(&doc, "sigma_n") - 10f64.sqrt()).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_tmp(&dir, "one.csv", "x,v\n1.5,2\n");
    assert_eq!(
        ckrige(&["fit", &one, "--basis", "linear"]).status.code(),
        Some(3)
    );
    let flat = write_tmp(&dir, "flat.csv", "x,v\n2,1\n2,5\n");
    assert_eq!(ckrige(&["zero-points", &flat]).status.code(), Some(3));
    assert_eq!(ckrige(&["complex-mean", &flat]).status.code(), Some(3));

    let bad = write_tmp(&dir, "bad.csv", "x,v\n1.7,abc\n");
    let out = ckrige(&["complex-mean", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2, column 2"), "{err}");

    assert_eq!(
        ckrige(&["fit", "/nonexistent/file.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ckrige(&["simulate", "--replicates", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ckrige(&["simulate", "--sigma", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ckrige(&["simulate", "--at", "somewhere"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ckrige(&["simulate", "--noise", "cauchy"]).status.code(),
        Some(2)
    );
    assert_eq!(ckrige(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ckrige(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_mode_writes_only_the_document() {
    let example = data("example.csv");
    for args in [
        vec!["zero-points", example.to_str().unwrap(), "--json"],
        vec!["fit", example.to_str().unwrap(), "--json"],
        vec!["simulate", "--replicates", "200", "--json"],
    ] {
        let out = ckrige(&args);
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        let mut stream = serde_json::Deserializer::from_str(&text).into_iter::<serde_json::Value>();
        assert!(stream.next().unwrap().is_ok());
        assert!(
            stream.next().is_none(),
            "more than one document for {args:?}"
        );
    }
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--replicates", "3000", "--seed", "99", "--json"];
    let a = ckrige(&args);
    let b = ckrige(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = ckrige(&[
        "simulate",
        "--replicates",
        "3000",
        "--seed",
        "100",
        "--json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_without_noise() {
    let doc = document(&ckrige(&[
        "simulate",
        "--sigma",
        "0",
        "--replicates",
        "100",
        "--json",
    ]));
    for key in [
        "mean_error_re",
        "mean_error_im",
        "var_re",
        "var_im",
        "cov_re_im",
    ] {
        assert!(real(&doc, key).abs() < 1e-12, "{key}");
    }
}

#[test]
fn simulate_at_zero_variance_point() {
    let doc = document(&ckrige(&[
        "simulate",
        "--n",
        "11",
        "--sigma",
        "1",
        "--replicates",
        "100000",
        "--json",
    ]));
    for key in ["var_re", "var_im"] {
        let v = real(&doc, key);
        assert!((v - 1.0 / 11.0).abs() <= 0.05 / 11.0, "{key} = {v}");
    }
}

#[test]
fn table_output() {
    let example = data("example.csv");
    let out = ckrige(&["complex-mean", example.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("complex-mean\n"));
    assert!(text.contains("real_standard_error"));
    assert!(text.contains("6.1 - 0.2i"));
}
