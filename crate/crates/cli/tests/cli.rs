use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropylab"))
        .args(args)
        .env("ENTROPYLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn verify_operator_is_reproducible_modulo_run_info() {
    let dir = TempDir::new().unwrap();
    let (r1, r2) = (p(&dir, "a.json"), p(&dir, "b.json"));
    for r in [&r1, &r2] {
        let out = run(&["verify", "operator", "--trials", "10", "--seed", "1", "--report", r]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    let (mut a, mut b) = (read_json(r1.as_ref()), read_json(r2.as_ref()));
    assert!(a.get("run").is_some());
    a.as_object_mut().unwrap().remove("run");
    b.as_object_mut().unwrap().remove("run");
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 1);
    assert_eq!(a["total_failures"], 0);
}

#[test]
fn zero_trials_is_a_usage_error() {
    let out = run(&["verify", "operator", "--trials", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn unknown_suite_and_flags_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "bogus"])), 2);
    assert_eq!(code(&run(&["verify", "operator", "--frobnicate"])), 2);
}

#[test]
fn config_file_and_plot_output() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    fs::write(&cfg, r#"{"trials": 2, "conjugation_trials": 2, "p_values": [0.3, 0.5]}"#).unwrap();
    let plot = p(&dir, "plot.csv");
    let report = p(&dir, "r.json");
    let out = run(&["verify", "functional", "--config", &cfg, "--plot", &plot, "--report", &report]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let csv = fs::read_to_string(&plot).unwrap();
    assert!(csv.starts_with("check,p,count,failures,min_headroom\n"));
    assert!(csv.lines().any(|l| l.starts_with("theorem41,0.3,")));
    assert_eq!(read_json(report.as_ref())["config"]["trials"], 2);
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    fs::write(&cfg, r#"{"trials": 2, "unknown_key": true}"#).unwrap();
    assert_eq!(code(&run(&["verify", "operator", "--config", &cfg])), 2);
    assert_eq!(code(&run(&["verify", "operator", "--config", &p(&dir, "missing.json")])), 2);
}

#[test]
fn crossbackend_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    fs::write(&cfg, r#"{"trials": 1, "p_values": [0.5], "cross_values": [0.5, 4]}"#).unwrap();
    let report = p(&dir, "r.json");
    let out = run(&["verify", "crossbackend", "--config", &cfg, "--report", &report]);
    assert_eq!(code(&out), 1);
    let r = read_json(report.as_ref());
    assert!(r["checks"]["cross_backend"]["failures"].as_u64().unwrap() > 0);
    let failure = &r["failures"][0];
    assert!(failure["witness"]["params"]["radius"].is_number());
}

#[test]
fn crossbackend_passes_on_moderate_ratios() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "cfg.json");
    fs::write(&cfg, r#"{"trials": 1, "p_values": [0.5], "cross_values": [1, 2]}"#).unwrap();
    let out = run(&["verify", "crossbackend", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn conjugate_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = p(&dir, "f.csv");
    let output = p(&dir, "fstar.csv");
    let mut csv = String::from("x,value\n");
    for i in 0..=200 {
        let x = -2.0 + 0.02 * i as f64;
        csv.push_str(&format!("{x},{}\n", x * x));
    }
    fs::write(&input, csv).unwrap();
    let out = run(&["conjugate", &input, &output, "--report", &p(&dir, "r.json")]);
    assert_eq!(code(&out), 0);
    let conj = fs::read_to_string(&output).unwrap();
    let mut rows = 0;
    for line in conj.lines().skip(1) {
        let (s, v) = line.split_once(',').unwrap();
        let (s, v): (f64, f64) = (s.parse().unwrap(), v.parse().unwrap());
        // (x²)* = s²/4 for slopes attained inside [−2, 2]
        if s.abs() <= 3.9 {
            assert!((v - s * s / 4.0).abs() < 1e-3, "s = {s}: {v}");
            rows += 1;
        }
    }
    assert!(rows > 10);
}

#[test]
fn conjugate_missing_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let out = run(&["conjugate", &p(&dir, "nope.csv"), &p(&dir, "out.csv")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn entropy_routes_agree_on_scalars() {
    let value = |args: &[&str]| -> f64 {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["value"][0][0].as_f64().unwrap()
    };
    let e = std::f64::consts::E.to_string();
    assert!((value(&["entropy", "--a", "1", "--b", &e]) - 1.0).abs() < 1e-12);
    assert!((value(&["entropy", "--a", "1", "--b", &e, "--via", "integral"]) - 1.0).abs() < 1e-8);
    let chain = 2.0 * 4f64.ln();
    for via in ["spectral", "identity", "integral"] {
        let got = value(&["entropy", "--a", "1", "--b", "4", "--p", "0.5", "--via", via]);
        assert!((got - chain).abs() < 1e-8, "{via}: {got}");
    }
}

#[test]
fn entropy_reads_matrix_files() {
    let dir = TempDir::new().unwrap();
    let a = p(&dir, "a.json");
    let b = p(&dir, "b.csv");
    fs::write(&a, r#"{"dim": 2, "rows": [[2, 0.5], [0.5, 1]]}"#).unwrap();
    fs::write(&b, "1, 0\n0, 3\n").unwrap();
    let report = p(&dir, "r.json");
    let out = run(&["entropy", "--a", &a, "--b", &b, "--p", "0.3", "--via", "identity", "--report", &report]);
    assert_eq!(code(&out), 0);
    let r = read_json(report.as_ref());
    assert!(r["halves_deviation"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["value"].as_array().unwrap().len(), 2);
}

#[test]
fn entropy_input_errors_exit_two() {
    assert_eq!(code(&run(&["entropy", "--a", "1", "--b", "4", "--via", "identity"])), 2);
    assert_eq!(code(&run(&["entropy", "--a", "-1", "--b", "4"])), 2);
    assert_eq!(code(&run(&["entropy", "--a", "1", "--b", "4", "--p", "1.5"])), 2);
}

#[test]
fn convergence_column_is_monotone() {
    let dir = TempDir::new().unwrap();
    let plot = p(&dir, "conv.csv");
    let out = run(&["convergence", "--plot", &plot, "--report", &p(&dir, "r.json")]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(&plot).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("route,p,nodes,error,monotone"));
    for line in lines {
        assert!(line.ends_with(",true"), "{line}");
    }
}

#[test]
fn sandwich_has_nine_ordered_rows() {
    let out = run(&["sandwich", "--a", "1", "--b", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!(r[1] <= r[2] && r[2] <= r[3], "{r:?}");
    }
}
