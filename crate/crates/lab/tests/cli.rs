use std::path::Path;
use std::process::{Command, Output};

fn be_lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_be-lab")).args(args).arg("--out").arg(out).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("cfg.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const SWEEP: &str = r#"
schema_version = 1

[run]
grid = 200

[[family]]
name = "weighted"
manifold = { kind = "sphere" }
dims = [2, 3]
density = { kind = "cosine", epsilon = [0.2, 0.6] }
gamma = 1.0

[[family]]
name = "loop"
manifold = { kind = "circle", length = 6.283185307179586 }
"#;

#[test]
fn sweep_csv_is_order_stable_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let one = be_lab(&["sweep", "--config", &cfg, "--workers", "1"], &dir.path().join("a"));
    let four = be_lab(&["sweep", "--config", &cfg, "--workers", "4"], &dir.path().join("b"));
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stdout));
    assert_eq!(four.status.code(), Some(0));
    let a = std::fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b/sweep.csv")).unwrap();
    assert_eq!(a, b);
    let mut rows = csv::Reader::from_reader(a.as_bytes());
    let families: Vec<String> = rows.records().map(|r| r.unwrap()[0].to_owned()).collect();
    assert_eq!(families, ["weighted", "weighted", "weighted", "weighted", "loop"]);
}

#[test]
fn json_report_carries_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let out = be_lab(&["certify", "--config", &cfg, "--format", "json", "--grid", "120"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("certify.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "certify");
    assert_eq!(v["environment"]["grid"], 120);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert!(v["rows"][0]["margin_ling"].as_f64().unwrap() > 0.0);
}

#[test]
fn missing_or_invalid_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(be_lab(&["spectrum"], dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), &format!("{SWEEP}\nunexpected = true\n"));
    assert_eq!(be_lab(&["sweep", "--config", &cfg], dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), &SWEEP.replace("schema_version = 1", "schema_version = 9"));
    assert_eq!(be_lab(&["sweep", "--config", &cfg], dir.path()).status.code(), Some(2));
    assert_eq!(be_lab(&["no-such-command"], dir.path()).status.code(), Some(2));
    assert_eq!(be_lab(&["verify-paper", "--format", "xml"], dir.path()).status.code(), Some(2));
}

#[test]
fn model_error_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
schema_version = 1
[[family]]
name = "aperiodic"
manifold = { kind = "circle", length = 5.0 }
density = { kind = "cosine", epsilon = [0.3] }
"#,
    );
    let out = be_lab(&["spectrum", "--config", &cfg, "--grid", "64"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv.contains("model-error"));
}

#[test]
fn soliton_check_on_round_spheres() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
schema_version = 1
[run]
grid = 200
[[family]]
name = "s4"
manifold = { kind = "sphere" }
dims = [4]
gamma = 3.0
"#,
    );
    let out = be_lab(&["soliton-check", "--config", &cfg, "--tolerance-profile", "strict"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("soliton-check.csv")).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().clone();
    let row = r.records().next().unwrap().unwrap();
    let get = |name: &str| row[header.iter().position(|h| h == name).unwrap()].to_owned();
    assert!(get("soliton_residual").parse::<f64>().unwrap() < 1e-10);
    assert_eq!(get("gap_verdict"), "nontrivial-soliton-possible");
    assert_eq!(get("verdict"), "pass");
}

#[test]
fn barrier_table_has_1001_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = be_lab(&["emit-barriers", "--a", "0.3", "--delta", "0.2", "--mu", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("barriers.csv")).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["t", "xi", "eta", "z"]);
    let rows: Vec<Vec<f64>> =
        r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 1001);
    // z = 1 + (a/b) η + μδ ξ at every point.
    for p in &rows {
        let z = 1.0 + 0.3 / 1.01 * p[2] + 0.5 * 0.2 * p[1];
        assert!((p[3] - z).abs() < 1e-14);
    }
    let out = be_lab(&["emit-barriers", "--mu", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
