use klortho::ortho::{coefficient_table, CaseId, OrthoCase};
use serde_json::Value;
use std::f64::consts::PI;
use std::process::{Command, Output};

fn klortho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klortho")).args(args).env_remove("KLORTHO_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn number(o: &Output) -> f64 {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn schema(name: &str) -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/").to_owned() + name;
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_matches_the_library() {
    let v = number(&klortho(&["eval", "besselk-imag", "--tau", "1", "--x", "1"]));
    assert_eq!(v, klortho::specfun::besselk_imag(1.0, 1.0, false).unwrap());
    let v = number(&klortho(&["eval", "gamma-abs-sq", "--a", "1", "--t", "2"]));
    assert!((v - 2.0 * PI / (2.0 * PI).sinh()).abs() < 1e-14);
    let v = number(&klortho(&["eval", "laguerre", "--n", "2", "--alpha", "0", "--x", "-1"]));
    assert!((v - 3.5).abs() < 1e-15);
}

#[test]
fn transform_invert_and_convolve() {
    let v = number(&klortho(&["transform", "--f", "exp(-x)", "--tau", "1"]));
    assert!((v - PI / PI.sinh()).abs() < 1e-12, "{v}");
    let v = number(&klortho(&["convolve", "--f", "exp(-x)", "--g", "exp(-x)", "--x", "1"]));
    assert!(v > 0.0 && v.is_finite());
    // the inversion of a Gaussian image, checked against the library path
    let v = number(&klortho(&["invert", "--image", "exp(-tau^2)", "--x", "1"]));
    let expr = klortho::cli::Expr::parse("exp(-tau^2)", "tau").unwrap();
    let quad = klortho::quad::QuadSpec::default();
    let big_f = expr.index_function(quad.log_cutoff()).unwrap();
    let w = klortho::kl::kl_inverse(&big_f, 1.0, &Default::default(), &quad).unwrap();
    assert_eq!(v, w);
}

#[test]
fn verify_prints_a_passing_report() {
    let o = klortho(&["verify", "--case", "LAG_2_4", "--alpha", "0", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], Value::Bool(true));
    assert_eq!(r["N"], 3);
    assert_eq!(r["case"], "LAG_2_4");
    let s = schema("gram_report.schema.json");
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    for k in s["required"].as_array().unwrap() {
        assert!(keys.contains(&k.as_str().unwrap()), "missing {k}");
    }
    for k in &keys {
        assert!(s["properties"].get(*k).is_some(), "undocumented {k}");
    }
}

#[test]
fn output_is_reproducible_across_runs_and_thread_counts() {
    let args = ["gram", "--case", "GEN_2_6", "--n", "2"];
    let a = klortho(&args);
    let b = klortho(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_klortho")).args(args).env("KLORTHO_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn failing_verification_exits_with_one() {
    let o = klortho(&["verify", "--case", "LAG_2_4", "--n", "3", "--tol-off", "1e-300", "--tol-diag", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], Value::Bool(false));
    // gram reports without judging
    let o = klortho(&["gram", "--case", "LAG_2_4", "--n", "3", "--tol-off", "1e-300"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["verify", "--case", "LAG_2_4", "--frobnicate", "1"], "--frobnicate"),
        (&["verify", "--case", "NOPE_1_1"], "--case"),
        (&["verify", "--case", "LAG_2_4", "--n", "99"], "--n"),
        (&["verify", "--case", "LAG_2_4", "--alpha", "inf"], "--alpha"),
        (&["verify", "--case", "LAG_2_4", "--eta", "1"], "--eta"),
        (&["verify", "--case", "LAG_2_4", "--abs-tol", "2"], "--abs-tol"),
        (&["verify", "--case", "LAG_2_4", "--coeffs", "/nonexistent.json"], "--coeffs"),
        (&["eval", "besselk-imag", "--x", "1"], "--tau"),
        (&["transform", "--f", "exp(-x", "--tau", "1"], "--f"),
        (&["transform", "--f", "exp(-x)", "--tau", "1", "--output", "csv"], "--output"),
        (&["invert", "--image", "exp(-tau)", "--x", "1"], "--image"),
    ];
    for (args, flag) in cases {
        let o = klortho(args);
        let err = stderr(&o);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.contains(flag), "{args:?}: {err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn list_cases_prints_every_identifier() {
    let o = klortho(&["list-cases"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 22);
    let expected: Vec<String> = CaseId::all().map(|c| c.as_str().to_owned()).collect();
    assert_eq!(lines, expected);
}

#[test]
fn csv_output_is_rfc4180() {
    let o = klortho(&["gram", "--case", "CDH_2_10", "--n", "2", "--output", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("n,m0,m1\r\n0,3.9269908169872"), "{text}");
    assert!(text.ends_with("\r\n") && !text.ends_with("\n\n"));
    assert_eq!(text.matches("\r\n").count(), 3);
}

#[test]
fn coefficient_tables_are_read_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = coefficient_table(&OrthoCase::new(CaseId::PrudnikovP), 3).unwrap();
    let good = dir.path().join("p.json");
    std::fs::write(&good, table.to_json_string()).unwrap();
    let o = klortho(&["verify", "--case", "PRUD_3_1", "--n", "3", "--coeffs", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"family":"P","rows":[[1],[2]]}"#).unwrap();
    let o = klortho(&["verify", "--case", "PRUD_3_1", "--coeffs", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 1"), "{}", stderr(&o));

    let o = klortho(&["verify", "--case", "LAG_2_4", "--coeffs", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn several_cases_in_one_verify() {
    let o = klortho(&["verify", "--case", "LAG_2_4", "--case", "cdh_2_10", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.as_array().unwrap().len(), 2);
    let o = klortho(&["verify", "--case", "LAG_2_4", "--case", "CDH_2_10", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
