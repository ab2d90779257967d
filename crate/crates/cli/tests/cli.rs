use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const K4: &str = r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3],[1,2],[2,3],[3,1]]}"#;

fn ep4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ep4"))
        .args(args)
        .env_remove("EP4_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn oracle_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.json", K4);
    let out = ep4(&["oracle", "--in", &g]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), serde_json::json!({"nu": 1, "tau": 2}));
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ep4(&["gen", "--vertices", "40", "--keep", "0.8", "--subdivide", "0.2", "--seed", "3"]);
    assert_eq!(gen.status.code(), Some(0));
    let g = write(dir.path(), "g.json", std::str::from_utf8(&gen.stdout).unwrap());
    let out = ep4(&["solve", "--in", &g]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["ratio_bound_ok"], Value::Bool(true));
    let c = write(dir.path(), "g.cert.json", std::str::from_utf8(&out.stdout).unwrap());
    let ver = ep4(&["verify", "--in", &g, "--cert", &c]);
    assert_eq!(ver.status.code(), Some(0));
    assert_eq!(stdout_json(&ver)["passed"], Value::Bool(true));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.json", K4);
    let out = ep4(&["solve", "--in", &g]);
    let mut cert = stdout_json(&out);
    cert["transversal"].as_array_mut().unwrap().pop();
    let c = write(dir.path(), "bad.json", &cert.to_string());
    let ver = ep4(&["verify", "--in", &g, "--cert", &c]);
    assert_eq!(ver.status.code(), Some(1));
    let report = stdout_json(&ver);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"transversal"), "{failed:?}");
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.json", r#"{"vertices":[0],"edges":[[0,0]]}"#);
    assert_eq!(ep4(&["solve", "--in", &g]).status.code(), Some(2));
    let g = write(dir.path(), "trunc.json", "{\"vertices\":");
    assert_eq!(ep4(&["stats", "--in", &g]).status.code(), Some(2));
    assert_eq!(ep4(&["solve", "--in", "missing.json"]).status.code(), Some(2));
    assert_eq!(ep4(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_planar_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut edges = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            edges.push(format!("[{a},{b}]"));
        }
    }
    let k5 = format!(r#"{{"vertices":[0,1,2,3,4],"edges":[{}]}}"#, edges.join(","));
    let g = write(dir.path(), "k5.json", &k5);
    assert_eq!(ep4(&["solve", "--in", &g]).status.code(), Some(2));
}

#[test]
fn gen_respects_seed_env() {
    let a = ep4(&["gen", "--vertices", "25", "--seed", "9"]);
    let b = Command::new(env!("CARGO_BIN_EXE_ep4"))
        .args(["gen", "--vertices", "25"])
        .env("EP4_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = ep4(&["gen", "--vertices", "25", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn graph_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ep4(&["gen", "--vertices", "30", "--keep", "0.6", "--seed", "4"]);
    let g = write(dir.path(), "g.json", std::str::from_utf8(&gen.stdout).unwrap());
    let d = dir.path().join("copy.json");
    let again = ep4(&["gen", "--vertices", "30", "--keep", "0.6", "--seed", "4", "--out", d.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read(&g).unwrap(), fs::read(&d).unwrap());
}

#[test]
fn stats_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.json", K4);
    let out = ep4(&["stats", "--in", &g]);
    let s = stdout_json(&out);
    assert_eq!(s["faces"], 4);
    assert_eq!(s["odd_faces"], 4);
    for view in ["graph", "vf", "conflict"] {
        let out = ep4(&["stats", "--in", &g, "--format", "dot", "--view", view]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.trim_end().ends_with('}'), "{view}: {text}");
    }
}

#[test]
fn batch_directory() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", K4);
    write(dir.path(), "b.json", r#"{"vertices":["x","y"],"edges":[["x","y"]]}"#);
    let certs = dir.path().join("certs");
    let out = ep4(&["solve", "--dir", dir.path().to_str().unwrap(), "--out", certs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l["ok"] == Value::Bool(true)));
    assert!(certs.join("a.cert.json").exists());

    write(dir.path(), "c.json", "not json");
    let out = ep4(&["oracle", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_small() {
    let out = ep4(&["selftest", "--count", "30", "--max-vertices", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
