use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn uvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uvlab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn instance(file: &str) -> String {
    corpus(file).to_string_lossy().into_owned()
}

#[test]
fn oracle_on_triangle() {
    let v = json(&uvlab(&["run", "--instance", &instance("k3_n2.sgc"), "--protocol", "oracle"]));
    assert_eq!(v["colorable"], true);
    assert_eq!(v["m"], 3);
    let col: Vec<u64> = v["coloring"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    assert!(col[0] != col[1] && col[1] != col[2] && col[0] != col[2]);
}

#[test]
fn honest_two_proof_run_accepts() {
    let v = json(&uvlab(&["run", "--instance", &instance("k3_n2.sgc"), "--protocol", "qma2"]));
    assert!((v["p_total"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn near_coloring_on_k4() {
    let v = json(&uvlab(&[
        "run", "--instance", &instance("k4_n2.sgc"), "--protocol", "qma2", "--strategy", "near-coloring",
    ]));
    assert!((v["p_total"].as_f64().unwrap() - (1.0 - 1.0 / 24.0)).abs() < 1e-12);
}

#[test]
fn bellqma_completeness() {
    let v = json(&uvlab(&[
        "run", "--instance", &instance("k3_n2.sgc"), "--protocol", "bellqma", "--k", "240", "--mode", "mc",
        "--samples", "20000",
    ]));
    assert!(v["p_total"].as_f64().unwrap() >= 1.0 - 2f64.powi(-6));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = uvlab(&[
            "run", "--instance", &instance("k4_n2.sgc"), "--protocol", "bellqma", "--strategy", "random",
            "--k", "24", "--mode", "mc", "--samples", "5000", "--seed", "9", "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sgc");
    std::fs::write(&bad, "SGC 1\nn 2\nm 3\nw0 = XOR u0 v0\n").unwrap();
    let o = uvlab(&["run", "--instance", bad.to_str().unwrap(), "--protocol", "qma2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let missing = dir.path().join("nope.sgc");
    let o = uvlab(&["run", "--instance", missing.to_str().unwrap(), "--protocol", "oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn honest_on_non_colorable_exits_two() {
    let o = uvlab(&["run", "--instance", &instance("k4_n2.sgc"), "--protocol", "qma2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_coloring_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let col = dir.path().join("col.json");
    std::fs::write(&col, "[0, 0, 1]").unwrap();
    let o = uvlab(&[
        "run", "--instance", &instance("k3_n2.sgc"), "--protocol", "qma2", "--coloring", col.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_three() {
    let o = uvlab(&[
        "run", "--instance", &instance("k4_n3.sgc"), "--protocol", "seesaw", "--restarts", "1",
    ]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.sgc");
    std::fs::write(&big, "SGC 1\nn 5\nm 2\nw0 = CONST1\nw1 = CONST0\nout pair w0\nout edge w1\n").unwrap();
    let o = uvlab(&["run", "--instance", big.to_str().unwrap(), "--protocol", "seesaw"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_uvlab"))
        .args(["run", "--instance", &instance("k4_n2.sgc"), "--protocol", "bellqma", "--k", "6", "--strategy", "random"])
        .env("UVLAB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    let o = uvlab(&["run", "--protocol", "qma2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn csv_output() {
    let o = uvlab(&["run", "--instance", &instance("k3_n2.sgc"), "--protocol", "qma2", "--csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), row.len());
    let i = header.iter().position(|h| *h == "p_total").unwrap();
    assert!((row[i].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn gadget_run() {
    let v = json(&uvlab(&["run", "--protocol", "gadget", "--inner-p", "0.5", "--seed", "3"]));
    let t = v["t"].as_f64().unwrap();
    let w = v["w_acceptance"].as_f64().unwrap();
    assert!((w - (1.0 - 2f64.powf(-t) * 0.5)).abs() < 1e-9);
}

#[test]
fn lemma_suite_passes_on_the_corpus() {
    let o = uvlab(&["suite", "lemmas", "--corpus", corpus("").to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{text}");
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn lemma_suite_reports_a_bad_manifest() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus("k4_n2.sgc"), dir.path().join("k4_n2.sgc")).unwrap();
    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{"instances":[{"name":"k4_n2","file":"k4_n2.sgc","n":2,"m":4,"colorable":true,"coloring":[0,1,2,0]}]}"#,
    )
    .unwrap();
    let summary = dir.path().join("summary.json");
    let o = uvlab(&[
        "suite", "lemmas", "--corpus", dir.path().to_str().unwrap(), "--out", summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL corpus_manifest")), "{text}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert!(v["failed"].as_u64().unwrap() >= 1);
}
