use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_lift-verify");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn manifest_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("manifests/warped2.toml")
        .display()
        .to_string()
}

fn write_manifest(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("m.toml");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const INDEFINITE: &str = r#"
[[manifold]]
name = "indefinite"
dim = 2
coords = ["x", "y"]
[manifold.metric]
g_11 = "x"
g_22 = "1"
[manifold.domain]
x = [-1.0, 1.0]
y = [-1.0, 1.0]
"#;

#[test]
fn catalog_lists_builtins() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    let s = stdout(&out);
    for name in ["flat2", "sphere2", "halfplane2"] {
        assert!(s.contains(name), "{s}");
    }
}

#[test]
fn theorem_passes_including_manifest() {
    let out = run(&[
        "run",
        "--suite",
        "theorem",
        "--manifest",
        &manifest_path(),
        "--samples",
        "20",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let s = stdout(&out);
    assert!(s.contains("warped2") && s.contains("overall: PASS"), "{s}");
}

#[test]
fn flipped_sign_fails_with_exit_one() {
    let out = run(&[
        "run",
        "--suite",
        "theorem",
        "--samples",
        "10",
        "--curvature-sign",
        "flipped",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("overall: FAIL"));
}

#[test]
fn check_single_property() {
    let out = run(&["check", "symplectic[bnw]", "--samples", "10", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert!(results
        .iter()
        .all(|r| r["property"] == "symplectic[bnw]" && r["pass"] == true));
    assert_eq!(v["meta"]["samples"], 10);
}

#[test]
fn not_symplectic_control_via_check() {
    let out = run(&["check", "not-symplectic-complete", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let manifolds: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["manifold"].as_str().unwrap())
        .collect();
    // flat2 has no threshold, hence no control
    assert_eq!(manifolds, ["sphere2", "halfplane2"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["run", "--bogus"])), 2);
    assert_eq!(code(&run(&["check", "no-such-property"])), 2);
    assert_eq!(code(&run(&["run", "--samples", "0"])), 2);
    assert_eq!(code(&run(&["run", "--manifest", "/definitely/missing.toml"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write_manifest(&dir, &INDEFINITE.replace("dim = 2", "dim = 2\ncolour = 1"));
    assert_eq!(code(&run(&["run", "--manifest", &bad])), 2);
    let clash = write_manifest(&dir, &INDEFINITE.replace("\"indefinite\"", "\"sphere2\""));
    assert_eq!(code(&run(&["run", "--manifest", &clash])), 2);
    let out = Command::new(BIN)
        .args(["catalog"])
        .env("LIFT_VERIFY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "catalog does not use the pool");
    let out = Command::new(BIN)
        .args(["run", "--suite", "theorem"])
        .env("LIFT_VERIFY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn indefinite_metric_exits_three_with_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(&dir, INDEFINITE);
    let out = run(&["run", "--manifest", &path, "--no-catalog", "--suite", "theorem"]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not positive definite at ["), "{err}");
}

#[test]
fn domain_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(&dir, &INDEFINITE.replace("g_11 = \"x\"", "g_11 = \"1 + sqrt(x)\""));
    let out = run(&["run", "--manifest", &path, "--no-catalog", "--suite", "theorem"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("sqrt"));
}

#[test]
fn json_reports_are_byte_identical() {
    let args = [
        "run",
        "--suite",
        "properties",
        "--samples",
        "6",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let a = Command::new(BIN)
        .args(args)
        .env("LIFT_VERIFY_THREADS", "1")
        .output()
        .unwrap();
    let b = Command::new(BIN)
        .args(args)
        .env("LIFT_VERIFY_THREADS", "4")
        .output()
        .unwrap();
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "run",
        "--suite",
        "properties",
        "--samples",
        "6",
        "--seed",
        "10",
        "--format",
        "json",
    ]);
    assert_ne!(a.stdout, c.stdout, "seed must matter");
}

#[test]
fn out_flag_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "run",
        "--suite",
        "theorem",
        "--samples",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("overall: PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["meta"]["seed"], 42);
}

#[test]
fn manifest_run_section_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let body =
        std::fs::read_to_string(manifest_path()).unwrap() + "\n[run]\nsamples = 4\nseed = 5\nsuites = [\"theorem\"]\n";
    let path = write_manifest(&dir, &body);
    let out = run(&["run", "--manifest", &path, "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["samples"], 4);
    assert_eq!(v["meta"]["seed"], 5);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    // flags win over the manifest
    let out = run(&["run", "--manifest", &path, "--format", "json", "--samples", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["samples"], 3);
}
