//! End-to-end runs of the `hyperarakelov` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const X5M1: &str = r#"{"coefficients": [[1,0],[0,0],[0,0],[0,0],[0,0],[-1,0]]}"#;
const X7MX: &str = r#"{"coefficients": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[-1,0],[0,0]]}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperarakelov"));
    c.env_remove("HYPERARAKELOV_CACHE_DIR").env_remove("HYPERARAKELOV_PRECISION").env("HYPERARAKELOV_LOG", "info");
    c
}

fn write_curve(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn sigma_poly_genus_three() {
    let o = run(&["sigma-poly", "--genus", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["sigma_text"], "z1*z3 - z2^2 - (1/3)*z2*z3^3 + (1/45)*z3^6");
    assert_eq!(v["weights"], serde_json::json!([5, 3, 1]));
}

#[test]
fn invariants_all_pass_and_report_delta() {
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let o = run(&["invariants", "--curve", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    let d = v["invariants"]["delta"]["via_closed_formula"]["value"].as_f64().unwrap();
    assert!(d.is_finite());
    assert!(v["residuals"]["g2_remark"]["pass"].as_bool().unwrap());
    assert!(stderr(&o).contains("stage=done status=pass"));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let out = dir.path().join("report.json");
    let o = run(&["-o", out.to_str().unwrap(), "check", "disc", "--curve", c.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(v["residuals"]["disc"]["value"].as_f64().unwrap() < 1e-6);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let args = ["invariants", "--curve", c.to_str().unwrap(), "--checks", "fast"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn missing_curve_is_an_input_error() {
    let o = run(&["invariants", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/curve.json"), "{}", stderr(&o));
}

#[test]
fn malformed_and_degenerate_curves_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write_curve(dir.path(), "bad.json", "{not json");
    let even = write_curve(dir.path(), "even.json", r#"{"roots": [[0,0],[1,0],[2,0],[3,0]]}"#);
    let repeated = write_curve(dir.path(), "rep.json", r#"{"roots": [[0,0],[1,0],[1,0],[2,0],[3,0]]}"#);
    for c in [bad, even, repeated] {
        let o = run(&["periods", "--curve", c.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}: {}", c.display(), stderr(&o));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["invariants", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sigma-poly"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let o = run(&["--precision", "80", "periods", "--curve", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("precision"), "{}", stderr(&o));
}

#[test]
fn g2_remark_needs_genus_two() {
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x7mx.json", X7MX);
    let o = run(&["check", "g2-remark", "--curve", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn theta_eval_odd_characteristic_vanishes_at_zero() {
    let dir = TempDir::new().unwrap();
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let o = run(&["theta-eval", "--curve", c.to_str().unwrap(), "--char", "1,0;1,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let re = v["theta"][0].as_f64().unwrap();
    let im = v["theta"][1].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-12, "{v}");
    let o = run(&["theta-eval", "--curve", c.to_str().unwrap(), "--z", "[[0.1,0],[0.2,0.1]]"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(json(&o)["log_faltings_norm"].as_f64().unwrap().is_finite());
}

#[test]
fn cache_hit_miss_and_corruption() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let c = write_curve(dir.path(), "x5m1.json", X5M1);
    let args = |tol: &str| {
        vec![
            "--cache-dir".to_string(),
            cache.to_str().unwrap().to_string(),
            "invariants".into(),
            "--checks".into(),
            "fast".into(),
            "--curve".into(),
            c.to_str().unwrap().into(),
            "--period-tol".into(),
            tol.into(),
        ]
    };
    let first = bin().args(args("1e-12")).output().unwrap();
    assert!(stderr(&first).contains("event=miss"), "{}", stderr(&first));
    let second = bin().args(args("1e-12")).output().unwrap();
    assert!(stderr(&second).contains("event=hit"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);

    let other = bin().args(args("1e-11")).output().unwrap();
    assert!(stderr(&other).contains("event=miss"), "{}", stderr(&other));

    for e in fs::read_dir(&cache).unwrap() {
        fs::write(e.unwrap().path(), "{ truncated").unwrap();
    }
    let third = bin().args(args("1e-12")).output().unwrap();
    assert!(third.status.success());
    assert!(stderr(&third).contains("event=corrupt"), "{}", stderr(&third));
    assert_eq!(first.stdout, third.stdout);

    let env = bin()
        .env("HYPERARAKELOV_CACHE_DIR", &cache)
        .args(["invariants", "--checks", "fast", "--curve", c.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(stderr(&env).contains("event=hit"), "{}", stderr(&env));
}
