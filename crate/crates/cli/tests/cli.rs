use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stablearn_cli::ExperimentReport;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_stablearn");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<(String, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pauli_word_text,probability"));
    lines
        .map(|l| {
            let (w, v) = l.split_once(',').unwrap();
            (w.to_string(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn gen_target_is_seeded() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let o = run(&["gen-target", "--kind", "clifford", "--n", "4", "--seed", seed, "--out", p(path)]);
        assert!(o.status.success());
    }
    let read = |x: &Path| std::fs::read(x).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn gen_target_emits_tdepth1_sections() {
    let o = run(&["gen-target", "--kind", "tdepth1", "--n", "3", "--k", "2", "--seed", "1"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["n"], 3);
    assert!(j["c1"].is_array() && j["c2"].is_array());
    assert_eq!(j["v"].as_str().unwrap().matches('1').count(), 2);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["gen-target", "--kind", "tdepth1", "--n", "3", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["learn", "--target", p(&fixture("worked_example.json")), "--algo", "clifford"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["learn", "--target", "/nonexistent.json", "--algo", "clifford"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bench", "--suite", "clifford", "--n-range", "5..2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn learns_clifford_within_budget() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("t.json");
    let hyp = dir.path().join("h.json");
    let rep = dir.path().join("r.json");
    assert!(run(&["gen-target", "--kind", "clifford", "--n", "6", "--seed", "11", "--out", p(&target)])
        .status
        .success());
    let o = run(&[
        "learn", "--target", p(&target), "--algo", "clifford", "--seed", "2", "--out", p(&hyp),
        "--report", p(&rep),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = ExperimentReport::from_json(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(r.success);
    assert!(r.net_queries() <= 2 * 36 + 60 + 4);
    assert_eq!(r.fidelities.len(), 64);
    assert_eq!(r.rng, "ChaCha8");
    let o = run(&["verify", "--target", p(&target), "--hypothesis", p(&hyp)]);
    assert!(o.status.success());
}

#[test]
fn learns_worked_example() {
    let dir = TempDir::new().unwrap();
    let hyp = dir.path().join("h.json");
    let rep = dir.path().join("r.json");
    let target = fixture("worked_example.json");
    let o = run(&[
        "learn", "--target", p(&target), "--algo", "tdepth1", "--seed", "5", "--out", p(&hyp),
        "--report", p(&rep),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = ExperimentReport::from_json(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!((r.n, r.k, r.k_hat), (2, 2, Some(2)));
    assert!(r.net_queries() <= r.query_budget);
    let h: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&hyp).unwrap()).unwrap();
    let gates = h["gates"].as_array().unwrap();
    assert_eq!(gates.iter().filter(|g| g["g"] == "T").count(), 2);
    let o = run(&["verify", "--target", p(&target), "--hypothesis", p(&hyp), "--mode", "unitary"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn tdepth1_accepts_clifford_targets() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("t.json");
    let rep = dir.path().join("r.json");
    run(&["gen-target", "--kind", "clifford", "--n", "3", "--seed", "4", "--out", p(&target)]);
    let o = run(&["learn", "--target", p(&target), "--algo", "tdepth1", "--report", p(&rep), "--out", p(&dir.path().join("h.json"))]);
    assert!(o.status.success());
    let r = ExperimentReport::from_json(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!((r.k, r.k_hat), (0, Some(0)));
}

#[test]
fn verify_detects_trailing_z() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = r#"{"n": 2, "gates": [{"g": "H", "q": [0]}, {"g": "CX", "q": [0, 1]}]}"#;
    let d = r#"{"n": 2, "gates": [{"g": "H", "q": [0]}, {"g": "CX", "q": [0, 1]}, {"g": "Z", "q": [1]}]}"#;
    std::fs::write(&a, c).unwrap();
    std::fs::write(&b, d).unwrap();
    assert!(run(&["verify", "--target", p(&a), "--hypothesis", p(&a)]).status.success());
    let o = run(&["verify", "--target", p(&a), "--hypothesis", p(&b)]);
    assert_eq!(o.status.code(), Some(1));
    let j: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(!j["failing_inputs"].as_array().unwrap().is_empty());
    assert_eq!(run(&["verify", "--target", p(&a), "--hypothesis", p(&b), "--mode", "unitary"]).status.code(), Some(1));
}

#[test]
fn unitary_mode_is_guarded() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    run(&["gen-target", "--kind", "clifford", "--n", "4", "--out", p(&a)]);
    let o = run(&["verify", "--target", p(&a), "--hypothesis", p(&a), "--mode", "unitary"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worked_example_tables() {
    let t = fixture("worked_example.json");
    let o = run(&["dist", "--target", p(&t), "--what", "bell-conj", "--check-dense"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    let expect = [
        ("II", 0.25),
        ("XX", 0.0625),
        ("XY", 0.0625),
        ("XZ", 0.125),
        ("YX", 0.0625),
        ("YY", 0.0625),
        ("YZ", 0.125),
        ("ZX", 0.125),
        ("ZY", 0.125),
    ];
    assert_eq!(rows.len(), expect.len());
    for ((w, v), (ew, ev)) in rows.iter().zip(expect) {
        assert_eq!(w, ew);
        assert!((v - ev).abs() <= 1e-12);
    }

    let o = run(&["dist", "--target", p(&t), "--what", "bell-psipsi", "--check-dense"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 9);
    let yy = rows.iter().find(|(w, _)| w == "YY").unwrap().1;
    assert!((yy - 0.25).abs() <= 1e-12);

    let o = run(&["dist", "--target", p(&t), "--what", "pauli", "--op", "ZX", "--check-dense"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert!((rows[0].1 - (2.0 + 2f64.sqrt()) / 4.0).abs() <= 1e-12);
}

#[test]
fn dist_falls_back_to_dense_for_deeper_circuits() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let c = r#"{"n": 2, "gates": [{"g": "H", "q": [0]}, {"g": "T", "q": [0]}, {"g": "H", "q": [0]}, {"g": "T", "q": [0]}, {"g": "CX", "q": [0, 1]}]}"#;
    std::fs::write(&a, c).unwrap();
    for what in ["bell-conj", "bell-psipsi"] {
        let o = run(&["dist", "--target", p(&a), "--what", what, "--input", "01", "--check-dense"]);
        assert!(o.status.success());
        let total: f64 = csv_rows(&stdout(&o)).iter().map(|r| r.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bench_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let o = Command::new(BIN)
            .args(["bench", "--suite", "tdepth1", "--n-range", "2..3", "--k-max", "1", "--trials", "6", "--seed", "9", "--report", p(path)])
            .env("STABLEARN_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(j["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn clifford_bench_meets_bound() {
    let o = run(&["bench", "--suite", "clifford", "--n-range", "2..5", "--trials", "40", "--seed", "3"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for c in j["cells"].as_array().unwrap() {
        assert!(c["success_rate"].as_f64().unwrap() >= c["bound"].as_f64().unwrap() - 0.1, "{c}");
        assert_eq!(c["over_budget"], 0);
    }
}
