use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdsp")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

const RHO_A: &str = r#"{"rho10": "1", "rho01": "1", "rho20": "0", "rho02": "0", "rho11": "1"}"#;

#[test]
fn decide_rho_branch_a() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "rho.json", RHO_A);
    let o = cdsp(&["decide", "--input", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "subnormal");
    assert_eq!(v["branch"], "a");
    assert_eq!(v["rho"]["rho11"], "1");
}

#[test]
fn decide_precondition_exit_2() {
    let d = TempDir::new().unwrap();
    // gamma(1, 0) = 1 - 2 + 1 = 0
    let p = write(&d, "g.json", r#"{"a1": "-2", "a2": "1", "b1": "0", "b2": "1", "c1": "0"}"#);
    let o = cdsp(&["decide", "-i", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["verdict"], "precondition-violated");
    assert_eq!(v["precondition"]["hypothesis"], "positivity");
}

#[test]
fn decide_family_trace() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "f.json", r#"{"family": "bideg22", "params": {"a0": "1", "a1": "1", "a2": "2", "b0": "2", "b1": "3/2"}}"#);
    let o = cdsp(&["decide", "-i", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], true);
}

#[test]
fn cross_validate_finds_witness() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "rho.json", r#"{"rho10": "4", "rho01": "5", "rho20": "2", "rho02": "0", "rho11": "1"}"#);
    let o = cdsp(&["decide", "-i", s(&p), "--cross-validate"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["decision"]["verdict"], "not-subnormal");
    assert_eq!(v["agreement"], "witness-found");
}

#[test]
fn oracle_on_gamma_fails_with_witness_and_is_deterministic() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "g.json", r#"{"a1": "1", "a2": "0", "b1": "2", "b2": "1", "c1": "0"}"#);
    let csv = d.path().join("net.csv");
    let a = cdsp(&["oracle", "-i", s(&p), "--window", "12x12", "--max-order", "6", "--csv", s(&csv)]);
    let b = cdsp(&["oracle", "-i", s(&p), "--window", "12x12", "--max-order", "6", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["passed"], false);
    assert_eq!(v["witness"]["order"], serde_json::json!({"i": 3, "j": 3}));
    assert_eq!(v["witness"]["value"], "-239/42900");
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("m,n,value\n0,0,1\n"));
}

#[test]
fn oracle_on_net() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "net.json", r#"{"width": 3, "height": 3, "values": ["1","1/2","1/4","1/2","1/4","1/8","1/4","1/8","1/16"]}"#);
    let o = cdsp(&["oracle", "-i", s(&p), "--window", "3x3", "--max-order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn measure_bideg21_and_csv() {
    let d = TempDir::new().unwrap();
    let p = write(
        &d,
        "m.json",
        r#"{"source": "bideg21", "params": {"b0": "1", "b1": "1", "b2": "2", "a0": "1", "a1": "1"}, "moments": [[0, 0], [2, 3]]}"#,
    );
    let csv = d.path().join("w.csv");
    let o = cdsp(&["measure", "-i", s(&p), "--csv", s(&csv), "--grid", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["reports"][0]["residual"].as_f64().unwrap() < 1e-6);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("s,t,w\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn measure_line_roots_and_kernel() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "l.json", r#"{"source": "line-roots", "roots": [2, 1], "moments": [0, 1, 4]}"#);
    let o = cdsp(&["measure", "-i", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);

    let p = write(&d, "k.json", r#"{"source": "kernel", "z": [-5, 0]}"#);
    let o = cdsp(&["measure", "-i", s(&p), "--rel-tol", "1e-9"]);
    let v = json(&o);
    assert!((v["values"][0]["value"].as_f64().unwrap() + 0.3268).abs() < 1e-3);
    assert_eq!(v["values"][1]["value"], 1.0);
}

#[test]
fn measure_degenerate_line_exit_2() {
    let d = TempDir::new().unwrap();
    // b(m)^2 - 4a(m) = (2m + 2)^2 - 4(m + 1)^2 = 0
    let p = write(
        &d,
        "m.json",
        r#"{"source": "line22", "params": {"a0": "1", "a1": "1", "a2": "1", "b0": "2", "b1": "1"}, "moments": [[0, 0]]}"#,
    );
    let o = cdsp(&["measure", "-i", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn schema_errors_carry_pointer() {
    let d = TempDir::new().unwrap();
    let p = write(
        &d,
        "m.json",
        r#"{"source": "bideg21", "params": {"b0": "1", "b1": "1", "b2": "2", "a0": "1", "a1": "1"}, "moments": [[0, "z"]]}"#,
    );
    let o = cdsp(&["measure", "-i", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("schema error at /moments/0/1"), "{err}");

    let p = write(&d, "f.json", r#"{"family": "bideg21", "params": {"b0": "1", "b1": "1", "b2": "2", "a0": "1"}}"#);
    let o = cdsp(&["decide", "-i", s(&p)]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("schema error at /params"), "{err}");

    let p = write(&d, "x.json", "{not json");
    assert_eq!(cdsp(&["decide", "-i", s(&p)]).status.code(), Some(1));
}

#[test]
fn shift_round_trip_through_decide() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "rho.json", r#"{"rho10": "4", "rho01": "1", "rho20": "2", "rho02": "0", "rho11": "1"}"#);
    let bundle = d.path().join("bundle.json");
    let csv = d.path().join("csv");
    let o = cdsp(&["shift", "-i", s(&p), "-o", s(&bundle), "--window", "5x4", "--csv-dir", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["w1sq.csv", "w2sq.csv", "dual_w1sq.csv", "dual_w2sq.csv"] {
        assert_eq!(std::fs::read_to_string(csv.join(f)).unwrap().lines().count(), 21, "{f}");
    }

    let direct = json(&cdsp(&["decide", "-i", s(&p)]));
    let via = json(&cdsp(&["decide", "-i", s(&bundle)]));
    assert_eq!(direct["rho"], via["rho"]);
    assert_eq!(direct["verdict"], via["verdict"]);
    assert_eq!(via["branch"], "b-ii");
}

#[test]
fn corpus_cdsp_rows_pass() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("rows.json");
    let o = cdsp(&["corpus", "--filter", "cdsp", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() == 6, "{text}");
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
}

#[test]
fn corpus_boundary_entry_fails() {
    let o = cdsp(&["corpus", "--filter", "22-f1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("FAIL 22-f1 "), "{text}");
    assert!(text.contains("no witness within 32x32 up to order 8"));
}

#[test]
fn corpus_sweep_is_seeded() {
    let a = cdsp(&["corpus", "--filter", "random", "--sweep", "4", "--seed", "11"]);
    let b = cdsp(&["corpus", "--filter", "random", "--sweep", "4", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("4/4 passed"));
}
