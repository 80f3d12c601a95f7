use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn erfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erfs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

struct Workspace {
    dir: TempDir,
    id: String,
}

impl Workspace {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        fs::write(dir.path().join("frame.json"), r#"{"labels":["a","b","c"]}"#).unwrap();
        let frame = dir.path().join("frame.json");
        let out = erfs(&["frame-id", "--frame", frame.to_str().unwrap(), "--format", "csv"]);
        let id = stdout(&out).trim().to_string();
        Workspace { dir, id }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, body: &str) -> String {
        let text = format!(r#"{{"frame_id":"{}",{body}}}"#, self.id);
        fs::write(self.path(name), text).unwrap();
        self.arg(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

fn number(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn dempster_combination_of_crisp_masses() {
    let ws = Workspace::new();
    let left = ws.write("l.json", r#""focal":[{"set":[0,1],"mass":0.6},{"set":[0,1,2],"mass":0.4}]"#);
    let right = ws.write("r.json", r#""focal":[{"set":[2],"mass":0.5},{"set":[0],"mass":0.5}]"#);
    let v = json(&erfs(&[
        "combine", "--frame", &ws.arg("frame.json"), "--left", &left, "--right", &right, "--rule", "dempster",
    ]));
    assert!((number(&v["conflict"]) - 0.3).abs() < 1e-12);
    let focal = v["mass"]["focal"].as_array().unwrap();
    assert_eq!(focal.len(), 2);
    let masses: Vec<f64> = focal.iter().map(|f| number(&f["mass"])).collect();
    assert!((masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(masses.iter().any(|m| (m - 0.2 / 0.7).abs() < 1e-12));
}

#[test]
fn dempster_rejects_fuzzy_input() {
    let ws = Workspace::new();
    let left = ws.write("l.json", r#""focal":[{"set":[0,1],"mass":1.0}]"#);
    let right = ws.write("r.json", r#""focal":[{"mu":[1,0.5,0],"mass":1.0}]"#);
    let out = erfs(&[
        "combine", "--frame", &ws.arg("frame.json"), "--left", &left, "--right", &right, "--rule", "dempster",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("crisp"));
}

#[test]
fn soft_combination_writes_csv_by_extension() {
    let ws = Workspace::new();
    let left = ws.write("l.json", r#""focal":[{"mu":[1,0.5,0],"mass":1.0}]"#);
    let right = ws.write("r.json", r#""focal":[{"mu":[0.5,1,1],"mass":1.0}]"#);
    let target = ws.arg("out.csv");
    stdout(&erfs(&[
        "combine", "--frame", &ws.arg("frame.json"), "--left", &left, "--right", &right, "--rule", "soft-product",
        "--output", &target,
    ]));
    let csv = fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,b,c,mass");
    assert_eq!(lines[1], "1,1,0,1");
}

#[test]
fn mass_not_summing_to_one_is_rejected_with_location() {
    let ws = Workspace::new();
    let left = ws.write("l.json", r#""focal":[{"set":[0],"mass":0.5},{"set":[1],"mass":0.48}]"#);
    let out = erfs(&[
        "combine", "--frame", &ws.arg("frame.json"), "--left", &left, "--right", &left,
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("$.focal"), "{err}");
    assert!(err.contains("0.98"), "{err}");
}

#[test]
fn measures_of_a_possibility_distribution() {
    let ws = Workspace::new();
    let pi = ws.write("pi.json", r#""mu":[1,0.6,0.2]"#);
    let event = ws.write("a.json", r#""mu":[1,0,0]"#);
    let v = json(&erfs(&["measures", "--frame", &ws.arg("frame.json"), "--restriction", &pi, "--event", &event]));
    assert_eq!(number(&v["possibility"]), 1.0);
    assert!((number(&v["necessity"]) - 0.4).abs() < 1e-12);
    assert_eq!(number(&v["guaranteed"]), 1.0);
    assert!((number(&v["potential"]) - 0.8).abs() < 1e-12);
}

#[test]
fn event_table_lists_every_subset() {
    let ws = Workspace::new();
    let m = ws.write("m.json", r#""focal":[{"set":[0,1],"mass":0.6},{"set":[0,1,2],"mass":0.4}]"#);
    let csv = stdout(&erfs(&[
        "measures", "--frame", &ws.arg("frame.json"), "--mass", &m, "--event-table", "--format", "csv",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "event,bel,pl,q");
    assert_eq!(lines.len(), 9);
    assert!(lines.contains(&"a b,0.6,1,1"));
}

#[test]
fn coverage_table_matches_library() {
    let csv = stdout(&erfs(&["coverage", "--N", "100", "--n", "100", "--alphas", "0.05", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "1-alpha,cov_N100_n100");
    let lib = erfs::coverage_experiment(100, 100, 0.3, &[0.05]).unwrap();
    let got: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((got - lib.coverage[0]).abs() < 1e-12);
}

#[test]
fn coverage_needs_paired_sizes() {
    let out = erfs(&["coverage", "--N", "100,200", "--n", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn likelihood_peaks_at_observed_proportion() {
    let v = json(&erfs(&["likelihood", "--N", "10", "--n", "10", "--x", "3"]));
    assert!((number(&v["mle"]) - 0.3).abs() < 1e-12);
    assert_eq!(v["likelihood"].as_array().unwrap().len(), 11);
}

#[test]
fn prediction_is_reproducible_for_a_seed() {
    let args = ["predict", "--x", "28", "--K", "500", "--event", "0,0,1,1,1", "--seed", "11"];
    let a = stdout(&erfs(&args));
    let b = stdout(&erfs(&args));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(number(&v["bel"]) <= number(&v["pl"]));
    let other = stdout(&erfs(&["predict", "--x", "28", "--K", "500", "--event", "0,0,1,1,1", "--seed", "12"]));
    assert_ne!(a, other);
}

#[test]
fn dominance_scatter_has_header() {
    let csv = stdout(&erfs(&["dominance", "--K", "200", "--scatter", "30", "--format", "csv"]));
    assert!(csv.starts_with("x,event,belief,probability\n"));
    assert_eq!(csv.lines().count(), 1 + 32);
}

#[test]
fn worked_examples_pass_and_alias_works() {
    let csv = stdout(&erfs(&["worked-examples", "--format", "csv"]));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",PASS")));
    let listed = stdout(&erfs(&["paper-examples", "--list", "--format", "csv"]));
    assert_eq!(listed.lines().count(), csv.lines().count());
}

#[test]
fn help_documents_global_flags() {
    let help = stdout(&erfs(&["--help"]));
    for flag in ["--seed", "--format", "--output"] {
        assert!(help.contains(flag), "{flag}");
    }
    assert!(!help.contains("paper-examples"));
}

#[test]
fn missing_input_reports_path() {
    let out = erfs(&["frame-id", "--frame", Path::new("/nonexistent/frame.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/frame.json"));
}
