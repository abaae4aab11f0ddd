use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kgsphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgsphere"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let o = kgsphere(&all);
    let v = serde_json::from_slice(&o.stdout).expect("json on stdout");
    (o.status.code().unwrap(), v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn curvature_of_s2xr() {
    let (code, r) = json(&["curvature", "--preset", "s2xr"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "kgsphere.report/1");
    assert_eq!(r["data"]["scalar"], "-2");
    assert_eq!(r["data"]["reference_scalar"], "-1");
    let planes = r["data"]["sectional"].as_array().unwrap();
    let xy = planes.iter().find(|p| p["plane"] == "x-y").unwrap();
    assert!((xy["value"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(r["status"], "pass");
}

#[test]
fn curvature_text_lists_symbols() {
    let o = kgsphere(&["curvature"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Gamma^x_yy"), "{text}");
    assert!(text.contains("R = -2"), "{text}");
    assert!(text.contains("PASS first Bianchi identity"));
}

#[test]
fn curvature_of_flat_and_round_metrics() {
    let (code, r) = json(&["curvature", "--preset", "euclidean3"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["scalar"], "0");
    assert!(r["data"]["christoffel"].as_array().unwrap().is_empty());
    let (code, r) = json(&["curvature", "--preset", "sphere"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["scalar"], "2");
    let k = r["data"]["sectional"][0]["value"].as_f64().unwrap();
    assert!((k - 1.0).abs() < 1e-9);
}

#[test]
fn curvature_from_metric_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "round.toml", "name = \"round\"\ncoordinates = [\"x\", \"y\"]\n[metric]\n\"x,x\" = \"1\"\n\"y,y\" = \"sin(x)^2\"\n");
    let (code, r) = json(&["curvature", "--metric", &good]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["scalar"], "2");
    let bad = write(
        dir.path(),
        "bad.toml",
        "coordinates = [\"x\"]\n[metric]\n\"x,x\" = \"1 +* x\"\n",
    );
    let o = kgsphere(&["curvature", "--metric", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("x,x"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        kgsphere(&["curvature", "--preset", "torus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kgsphere(&["verify", "killing", "--f", "sin("])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kgsphere(&["simulate", "--preset", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(kgsphere(&["simulate"]).status.code(), Some(2));
    assert_eq!(kgsphere(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn algebra_table() {
    let o = kgsphere(&["verify", "algebra"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS [S1, S2] = S3"), "{text}");
    assert!(text.contains("PASS [S1, S3] = -S2"));
    assert!(text.contains("PASS [S2, S3] = S1"));
    assert!(text.contains("PASS Jacobi identity"));
}

#[test]
fn killing_symmetry_and_noether_pass() {
    for what in ["killing", "symmetry", "noether"] {
        let o = kgsphere(&["verify", what]);
        assert!(o.status.success(), "{what}: {}", stdout(&o));
    }
}

#[test]
fn contracted_currents_with_a_source_are_not_conserved() {
    let (code, r) = json(&["verify", "currents"]);
    assert_eq!(code, 1);
    let c = check(&r, "Div(contracted S0) = 0 on solutions, f = arbitrary");
    assert_eq!(c["passed"], false);
    assert!(c["detail"].as_str().unwrap().contains("f(u)"));
    let c = check(&r, "Div(canonical S0) = 0 on solutions, f = arbitrary");
    assert_eq!(c["verdict"], "PROVEN_ZERO");
}

#[test]
fn source_free_currents_pass_and_flag_discrepancies() {
    let (code, r) = json(&["verify", "currents", "--f", "zero"]);
    assert_eq!(code, 0);
    let subjects: Vec<&str> = r["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["subject"].as_str().unwrap())
        .collect();
    assert_eq!(subjects, ["S3 A^y", "Sinf A^y"]);
}

#[test]
fn reference_currents_are_reported_not_fatal() {
    let o = kgsphere(&[
        "verify",
        "currents",
        "--source",
        "reference",
        "--f",
        "linear:2",
    ]);
    let text = stdout(&o);
    assert!(text.contains("INFO Div(reference S0)"), "{text}");
    assert!(text.contains("WARN reference S0"));
    assert!(text.contains("WARN S3 A^y"));
}

#[test]
fn json_is_deterministic() {
    let a = kgsphere(&["verify", "killing", "--json", "-", "--seed", "7"]);
    let b = kgsphere(&["verify", "killing", "--json", "-", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["inputs"]["seed"], "7");
    assert!(v.get("timings").is_none());
    let t: Value = serde_json::from_slice(
        &kgsphere(&["verify", "algebra", "--json", "-", "--timings"]).stdout,
    )
    .unwrap();
    assert!(t["timings"]["algebra"].is_number());
}

#[test]
fn json_file_alongside_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json").display().to_string();
    let o = kgsphere(&["verify", "algebra", "--json", &path]);
    assert!(stdout(&o).contains("PASS:"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify algebra");
}

#[test]
fn export_currents() {
    let o = kgsphere(&["export-currents", "--f", "zero"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 5);
    assert_eq!(list[0]["generator"], "S0");
    assert!(list[0]["components"][0]["latex"]
        .as_str()
        .unwrap()
        .contains("\\sin"));
    let o = kgsphere(&["export-currents", "--source", "reference"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn simulate_constant_preset_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv").display().to_string();
    let o = kgsphere(&["simulate", "--preset", "constant", "--csv", &csv]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("t,S0,S0_flux,S0_budget"), "{header}");
    assert!(text.lines().count() > 2);
}

#[test]
fn simulate_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "nx = 48\nny = 48\nt_end = 0.5\nf = \"zero\"\ninitial = \"cos(x)\"\nmonitors = [\"S0\"]\n",
    );
    let (code, r) = json(&["simulate", &cfg]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["summary"]["grid"]["nx"], 48);
    let bad = write(
        dir.path(),
        "bad.toml",
        "nx = 24\nny = 24\nt_end = 0.5\ncfl = 3.0\ninitial = \"1\"\n",
    );
    assert_eq!(kgsphere(&["simulate", &bad]).status.code(), Some(2));
    let unknown = write(dir.path(), "unknown.toml", "nx = 24\nwidth = 3\n");
    assert_eq!(kgsphere(&["simulate", &unknown]).status.code(), Some(2));
}
