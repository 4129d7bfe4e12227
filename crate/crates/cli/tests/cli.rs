use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncomplex"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ncomplex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn euler_through_eval() {
    let o = run(&["eval", "--op", "exp", "planar:n=2:[0,3.14159]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let u: ncomplex::NComplex = text.trim().parse().unwrap();
    assert!((u.components()[0] + 1.0).abs() < 1e-10);
    assert!(u.components()[1].abs() < 1e-5);
}

#[test]
fn eval_json_output() {
    let o = run(&["--format", "json", "eval", "--op", "pow", "--m", "-1", "polar:n=3:[2,0,0]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["variant"], "polar");
    assert!((v["x"][0].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn count_only_square_roots() {
    let p = temp_file("sq.json", r#"{"variant":"polar","n":4,"coefficients":[0,-1]}"#);
    let o = run(&["factor", "--count-only", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn factor_lists_roots_and_count() {
    let p = temp_file("sq1.json", r#"{"variant":"planar","n":4,"coefficients":[0,1]}"#);
    let o = run(&["--format", "json", "factor", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["factorizations"].as_array().unwrap().len(), 2);
}

#[test]
fn domain_error_exit_code_and_name() {
    let o = run(&["eval", "--op", "log", "polar:n=3:[-1,0,0]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("DomainError"));
    let o = run(&["eval", "--op", "exp", "polar:n=3:[1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Parse"));
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["eval", "--op", "pow", "polar:n=2:[1,0]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["eval", "--op", "exp", "--bogus", "polar:n=2:[1,0]"]);
    assert_eq!(o.status.code(), Some(2));
    let c = temp_file("bad.json", r#"{"verbose":true}"#);
    let o = run(&["--config", c.to_str().unwrap(), "eval", "--op", "exp", "polar:n=2:[1,0]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_is_csv_with_header() {
    let o = run(&["table", "--variant", "planar", "--n", "2", "--from", "0", "--to", "1", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "y,f_20,f_21");
    assert_eq!(lines.len(), 4);
    let last: Vec<f64> = lines[3].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[1] - 1f64.cos()).abs() < 1e-14);
    assert!((last[2] - 1f64.sin()).abs() < 1e-14);
}

#[test]
fn integrate_prints_certificate() {
    let p = temp_file(
        "loop.json",
        r#"{"variant":"planar","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"closed":true}"#,
    );
    let o = run(&["integrate", p.to_str().unwrap(), "--function", "reciprocal", "--center", "planar:n=2:[0.1,0.2]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["winding"][0], 1);
    assert!(v["max_abs_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn singular_path_is_reported() {
    let p = temp_file("through.json", r#"{"variant":"planar","vertices":[[1,0],[-1,0],[0,1]],"closed":true}"#);
    let o = run(&["integrate", p.to_str().unwrap(), "--function", "reciprocal", "--center", "planar:n=2:[0,0]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SingularPath"));
}

#[test]
fn analyze_reports_radius() {
    let s = temp_file(
        "series.json",
        r#"{"variant":"polar","n":3,"coefficients":[[1,0,0],[0.5,0,0],[0.25,0,0],[0.125,0,0],[0.0625,0,0],[0.03125,0,0],[0.015625,0,0],[0.0078125,0,0],[0.00390625,0,0],[0.001953125,0,0]]}"#,
    );
    let o = run(&["analyze", s.to_str().unwrap(), "--riemann-at", "polar:n=3:[0.1,0.2,0.3]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["radii"]["c_plus"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["riemann"]["analytic"], true);
}

#[test]
fn spectrum_json_has_fields() {
    let o = run(&["spectrum", "polar:n=4:[1,0,2,-3]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["v_plus"].as_f64().unwrap()).abs() < 1e-15);
    assert!((v["v_minus"].as_f64().unwrap() - 6.0).abs() < 1e-15);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_small_run_is_deterministic() {
    let args = ["--format", "json", "verify", "--seed", "11", "--n-max", "4", "--samples", "20"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["passed"], true);
}
