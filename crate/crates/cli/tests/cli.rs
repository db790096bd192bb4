use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EX1: &str = r#"{"t_vars": ["u", "v", "w"],
  "pairs": [{"f": "u", "g": "v"}, {"f": "u^2", "g": "v^2"}, {"f": "v^2", "g": "w^2"}]}"#;
const TRIPLE_DIAG: &str = r#"{"t_vars": ["u", "v", "w"],
  "pairs": [{"f": "u", "g": "v"}, {"f": "u", "g": "v"}, {"f": "u", "g": "v"}]}"#;
const B: &str = "1 0 0\n-2 1 0\n1 -2 1\n0 1 -2\n0 0 1\n";
const C: &str = "1 -7 -6\n-1 4 3\n1 0 4\n0 1 -1\n-1 2 0\n";

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

fn kresolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kresolve")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn implicitize_example_one() {
    let fx = Fixture::new();
    let input = fx.file("ex1.json", EX1);
    let out = kresolve(&["implicitize", input.to_str().unwrap(), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["H"], "x0^2*y1 - y0^2*x1");
    assert_eq!(r["deg_phi"], 2);
    assert_eq!(r["multidegree"], serde_json::json!([4, 2, 2]));
    let f = &r["extra_factors"][0];
    assert_eq!((f["factor"].as_str(), f["exponent"].as_u64()), (Some("x2"), Some(2)));
    assert_eq!(f["point"], serde_json::json!(["(0:0:1)"]));
    for key in ["resultant", "conditions", "timings_ms"] {
        assert!(r.get(key).is_some());
    }
}

#[test]
fn strand_degree_and_backend_do_not_change_h() {
    let fx = Fixture::new();
    let input = fx.file("ex1.json", EX1);
    let base = json(&kresolve(&["implicitize", input.to_str().unwrap(), "--report", "json"]));
    let out = kresolve(&["implicitize", input.to_str().unwrap(), "--nu", "5", "--method", "both", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let other = json(&out);
    assert_eq!(other["H"], base["H"]);
    assert_eq!(other["resultant"], base["resultant"]);
}

#[test]
fn seed_does_not_change_the_answer() {
    let fx = Fixture::new();
    let input = fx.file("ex1.json", EX1);
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_kresolve"))
            .args(["resultant", input.to_str().unwrap(), "--method", "interpolate", "--report", "json"])
            .env("KRESOLVE_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        json(&out)["resultant"].clone()
    };
    assert_eq!(run("1"), run("987654321"));
}

#[test]
fn empty_x_required() {
    let fx = Fixture::new();
    let input = fx.file("diag.json", TRIPLE_DIAG);
    let out = kresolve(&["implicitize", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("X nonempty: (0:0:1)"));
    let out = kresolve(&["check", input.to_str().unwrap(), "--report", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["avramov_ok"], false);
}

#[test]
fn check_reports_strict_witness() {
    let fx = Fixture::new();
    let input = fx.file("ex1.json", EX1);
    let out = kresolve(&["check", input.to_str().unwrap(), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(c["strict_ok"], false);
    assert!(c["strict_witnesses"].as_array().unwrap().contains(&serde_json::json!([0, 1])));
}

#[test]
fn quartic_discriminant() {
    let fx = Fixture::new();
    let input = fx.file("B.txt", B);
    let out = kresolve(&["discriminant", input.to_str().unwrap(), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let mut seen: Vec<(String, String)> = r["extra_factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["point"][0].as_str().unwrap().to_string(), f["factor"].as_str().unwrap().to_string()))
        .collect();
    seen.sort();
    assert_eq!(seen, vec![("(1:2:3)".into(), "x2".into()), ("(3:2:1)".into(), "x0".into())]);
    assert_eq!(r["deg_phi"], 1);
    assert_eq!(r["matrix"]["used"][1], serde_json::json!([-2, 1, 0]));
}

#[test]
fn c_matrix_fails_conditions() {
    let fx = Fixture::new();
    let input = fx.file("C.txt", C);
    let out = kresolve(&["discriminant", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("X nonempty: (1:1:-1)"));
}

#[test]
fn input_errors_exit_one() {
    let fx = Fixture::new();
    let bad = fx.file("bad.json", r#"{"t_vars": ["u"], "pairs": "nope"}"#);
    assert_eq!(kresolve(&["implicitize", bad.to_str().unwrap()]).status.code(), Some(1));
    let common = fx.file(
        "common.json",
        r#"{"t_vars": ["u","v","w"], "pairs": [{"f":"u*v","g":"u*w"},{"f":"u","g":"v"},{"f":"v","g":"w"}]}"#,
    );
    let out = kresolve(&["implicitize", common.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("u"));
    let ex1 = fx.file("ex1.json", EX1);
    assert_eq!(kresolve(&["implicitize", ex1.to_str().unwrap(), "--nu", "2"]).status.code(), Some(1));
    assert_eq!(kresolve(&["implicitize", "/nonexistent/file.json"]).status.code(), Some(1));
    let b = fx.file("B.txt", B);
    let m = fx.file("M.txt", "1 12 -1\n0 6 -1\n0 5 1\n");
    let out = kresolve(&["discriminant", b.to_str().unwrap(), "--transform", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("determinant 11"));
    let zero_sum = fx.file("Z.txt", "1 0\n0 1\n");
    assert_eq!(kresolve(&["discriminant", zero_sum.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn permissive_mode_flag() {
    let fx = Fixture::new();
    let input = fx.file(
        "ex3.json",
        r#"{"t_vars": ["u","v","w"], "pairs": [{"f":"u*v","g":"u*w"},{"f":"u^2+v^2","g":"v^2"},{"f":"v^2","g":"w^2"}]}"#,
    );
    assert_eq!(kresolve(&["resultant", input.to_str().unwrap()]).status.code(), Some(1));
    let out = kresolve(&["resultant", input.to_str().unwrap(), "--mode", "permissive", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["multidegree"], serde_json::json!([4, 4, 4]));
}

#[test]
fn report_round_trips_through_json() {
    let fx = Fixture::new();
    let input = fx.file("ex1.json", EX1);
    let out = kresolve(&["implicitize", input.to_str().unwrap(), "--report", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = kresolve_core_report(&text);
    assert_eq!(report, serde_json::from_str::<Value>(&text).unwrap());
}

/// Re-serializes a report through the library types after re-normalizing
/// every polynomial.
fn kresolve_core_report(text: &str) -> Value {
    let r = kresolve_core::report::Report::from_json(text).unwrap().renormalized().unwrap();
    serde_json::from_str(&r.to_json()).unwrap()
}
