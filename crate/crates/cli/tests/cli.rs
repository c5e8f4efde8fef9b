use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gcnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcnn")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(text: &[u8]) -> serde_json::Value {
    serde_json::from_slice(text).unwrap()
}

#[test]
fn triangle_generated_and_counted() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.jsonl");
    let out = gcnn(&["gen", "--model", "er", "--n", "3", "--p", "1", "--count", "1", "--seed", "7", "--out", path(&d)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = gcnn(&["count", "--in", path(&d), "--k", "3"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["graphs"][0]["counts"]["Triangle"], 1);
    assert_eq!(v["graphs"][0]["counts"]["OpenTriangle"], 0);
    let out = gcnn(&["count", "--in", path(&d), "--pattern", "triangle"]);
    let v = json(&out.stdout);
    assert_eq!(v["k"], 3);
    assert_eq!(v["graphs"][0]["counts"].as_object().unwrap().len(), 1);
}

#[test]
fn flops_matches_formula() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("model.json");
    fs::write(&cfg, r#"{"input_dim":50,"filter1":5,"filter2":5,"channels1":8,"channels2":16}"#).unwrap();
    let out = gcnn(&["flops", "--config", path(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    let conv1 = 46u64 * 46 * 8 * (2 * 25 + 1);
    let conv2 = 42u64 * 42 * 16 * (2 * 25 * 8 + 1);
    let dense = 2 * 42u64 * 42 * 16 + 1;
    assert_eq!(v["conv1"], 863_328);
    assert_eq!(v["total"], conv1 + conv2 + dense);
}

#[test]
fn usage_errors_exit_one_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.jsonl");
    let out = gcnn(&["gen", "--model", "er", "--n", "5", "--out", path(&d)]);
    assert_eq!(out.status.code(), Some(1), "missing --p");
    assert!(!d.exists());
    let out = gcnn(&["gen", "--model", "er", "--n", "5", "--p", "0.5", "--bogus", "--out", path(&d)]);
    assert_eq!(out.status.code(), Some(1), "unknown flag");
    assert!(!d.exists());
    let out = gcnn(&["count", "--in", path(&d)]);
    assert_eq!(out.status.code(), Some(1), "neither --k nor --pattern");
    assert_eq!(gcnn(&["frobnicate"]).status.code(), Some(1));
    assert!(!gcnn(&["gen"]).stderr.is_empty());
}

#[test]
fn existing_output_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.jsonl");
    let args = ["gen", "--model", "rgg", "--n", "8", "--r", "0.5", "--count", "3", "--seed", "2", "--out", path(&d)];
    assert!(gcnn(&args).status.success());
    let first = fs::read(&d).unwrap();
    assert_eq!(gcnn(&args).status.code(), Some(2));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(gcnn(&forced).status.success());
    assert_eq!(fs::read(&d).unwrap(), first, "rerun is byte-identical");
}

#[test]
fn estimates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.jsonl");
    gcnn(&["gen", "--model", "er", "--n", "15", "--p", "0.4", "--count", "2", "--seed", "1", "--out", path(&d)]);
    for method in ["edge", "mcmc"] {
        let args = ["estimate", "--in", path(&d), "--pattern", "TailedTriangle", "--method", method, "--budget", "50", "--seed", "3"];
        let a = gcnn(&args);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, gcnn(&args).stdout);
        let v = json(&a.stdout);
        assert_eq!(v.as_array().unwrap().len(), 2);
        for key in ["graph_id", "pattern", "method", "budget", "estimate", "comparisons", "seed"] {
            assert!(!v[0][key].is_null(), "{key}");
        }
        assert_eq!(v[0]["method"], method);
    }
}

#[test]
fn malformed_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("bad.jsonl");
    fs::write(&d, "not json\n").unwrap();
    assert_eq!(gcnn(&["count", "--in", path(&d), "--k", "4"]).status.code(), Some(2));
    assert_eq!(gcnn(&["count", "--in", path(&dir.path().join("missing")), "--k", "4"]).status.code(), Some(2));
}

#[test]
fn version_reports_format_tags() {
    let out = gcnn(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("model format 1"), "{text}");
    assert!(text.contains("mac2-bias1-relu0/v1"), "{text}");
}

#[test]
fn train_eval_compare_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(
        &cfg,
        r#"{
            "source": {"kind": "er", "n": 10, "p": 0.5},
            "pattern": "Triangle",
            "splits": {"train": 16, "validation": 4, "test": 4},
            "model": {"filter1": 3, "filter2": 3, "channels1": 2, "channels2": 2},
            "train": {"max_epochs": 3},
            "compare": {"methods": ["edge_full", "edge_sampling"], "cap": 64},
            "seed": 4
        }"#,
    )
    .unwrap();
    let run = dir.path().join("run");
    let out = gcnn(&["train", "--config", path(&cfg), "--out", path(&run)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["config.json", "model.bin", "history.csv", "metrics.json"] {
        assert!(run.join(f).is_file(), "{f}");
    }
    assert_eq!(fs::read_to_string(run.join("history.csv")).unwrap().lines().count(), 4);
    assert_eq!(gcnn(&["train", "--config", path(&cfg), "--out", path(&run)]).status.code(), Some(2));

    let model = run.join("model.bin");
    let metrics = dir.path().join("metrics.json");
    let out = gcnn(&["eval", "--config", path(&cfg), "--model", path(&model), "--out", path(&metrics)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(run.join("metrics.json")).unwrap()).unwrap();
    let evaluated: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(written["test"]["e"], evaluated["e"]);

    let cmp = dir.path().join("cmp");
    let out = gcnn(&["compare", "--config", path(&cfg), "--model", path(&model), "--out", path(&cmp)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(cmp.join("comparison.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert!(rows[0].starts_with("method,error,ops,budget"));
    assert_eq!(rows.len(), 4);
    assert!(rows[2].starts_with("edge_full,0,"));
    let report = json(&fs::read(cmp.join("comparison.json")).unwrap());
    assert_eq!(report["rows"][0]["method"], "cnn");
    assert!(report["note"].as_str().unwrap().contains("Direction-only"));

    let flops = gcnn(&["flops", "--model", path(&model)]);
    assert!(flops.status.success());
    assert_eq!(json(&flops.stdout)["total"], report["rows"][0]["ops"].as_f64().unwrap() as u64);
}
