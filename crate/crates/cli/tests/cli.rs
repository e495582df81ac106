use std::path::Path;
use std::process::{Command, Output};

fn annealab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annealab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn file_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_screens_render() {
    for sub in ["gap-scan", "evolve", "tomo", "partition", "ledger"] {
        let out = annealab(&[sub, "--help"]);
        assert!(out.status.success(), "{sub} --help failed");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("--out"), "{sub} help misses --out");
    }
}

#[test]
fn partition_envelope_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partition.json");
    let out = annealab(&[
        "partition",
        "--gen",
        "uniform-int",
        "--n",
        "6",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = file_json(&path);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["config"]["command"], "partition");
    assert_eq!(v["config"]["instance"]["seed"], 7);
    assert!(v["min_value"].as_f64().unwrap() >= 0.0);
    assert!(v["num_optimal"].as_u64().unwrap() >= 1);
    assert!(v["assignments"].as_array().unwrap().len() >= 1);
}

#[test]
fn evolve_reruns_are_byte_identical() {
    // the embedded config echoes --out, so use the same relative path from
    // two different working directories
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let out = Command::new(env!("CARGO_BIN_EXE_annealab"))
            .current_dir(dir.path())
            .args([
                "evolve",
                "--gen",
                "uniform-real",
                "--n",
                "3",
                "--seed",
                "2",
                "--time",
                "8",
                "--out",
                "run.json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(
        std::fs::read(dirs[0].path().join("run.json")).unwrap(),
        std::fs::read(dirs[1].path().join("run.json")).unwrap()
    );
}

#[test]
fn evolve_feeds_tomo() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let out = annealab(&[
        "evolve",
        "--gen",
        "uniform-int",
        "--n",
        "3",
        "--seed",
        "4",
        "--time",
        "30",
        "--out",
        state.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let probability = file_json(&state)["success_probability"].as_f64().unwrap();
    assert!(probability > 0.5, "evolution should mostly succeed, got {probability}");

    let tomo_out = dir.path().join("tomo.json");
    let out = annealab(&[
        "tomo",
        "--state",
        state.to_str().unwrap(),
        "--shots",
        "2000",
        "--seed",
        "1",
        "--out",
        tomo_out.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = file_json(&tomo_out);
    assert_eq!(v["config"]["command"], "tomo");
    assert_eq!(v["num_qubits"], 3);
    let fid = v["fidelity"].as_f64().unwrap();
    assert!((0.0..=1.0 + 1e-9).contains(&fid));
    assert!(fid > 0.8, "fidelity {fid}");
}

#[test]
fn product_tomography_recovers_basis_state() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("product.json");
    std::fs::write(
        &spec,
        r#"{"factors": [[[1.0,0.0],[0.0,0.0]], [[0.0,0.0],[1.0,0.0]]]}"#,
    )
    .unwrap();
    let report = dir.path().join("tomo.json");
    let out = annealab(&[
        "tomo",
        "--product",
        spec.to_str().unwrap(),
        "--mode",
        "product",
        "--shots",
        "5000",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = file_json(&report);
    assert_eq!(v["mode"], "product");
    assert!(v["fidelity"].as_f64().unwrap() > 0.99);
}

#[test]
fn gap_scan_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gap.csv");
    let out = annealab(&[
        "gap-scan",
        "--gen",
        "uniform-int",
        "--n",
        "4",
        "--grid",
        "16",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema_version="));
    assert!(lines.next().unwrap().starts_with("# tool_version="));
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next().unwrap(), "s,e0,e1,gap");
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 16, "expected refined grid, got {} rows", rows.len());
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        assert!(fields[2] >= fields[1] - 1e-12, "levels out of order: {row}");
        assert!((fields[3] - (fields[2] - fields[1])).abs() < 1e-9);
    }
    // summary on stdout
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["min_gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn ledger_reruns_are_byte_identical() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let out = Command::new(env!("CARGO_BIN_EXE_annealab"))
            .current_dir(dir.path())
            .args([
                "ledger",
                "--n-min",
                "2",
                "--n-max",
                "5",
                "--n-step",
                "1",
                "--instances",
                "1",
                "--target",
                "0.6",
                "--seed",
                "3",
                "--scan-cap",
                "4",
                "--out",
                "report.json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = dirs[0].path().join("report.json");
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(dirs[1].path().join("report.json")).unwrap()
    );
    let v = file_json(&a);
    assert_eq!(v["config"]["command"], "ledger");
    assert!(v["report"]["costs"].as_array().unwrap().len() > 0);
    assert!(v["report"]["provenance"]["verdict_protocol"].as_str().unwrap().len() > 0);
}

#[test]
fn coarse_steps_fail_loudly() {
    let out = annealab(&[
        "evolve", "--gen", "uniform-int", "--n", "4", "--time", "50", "--steps", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("StepTooCoarse"), "stderr: {err}");
}

#[test]
fn missing_instance_file_fails_loudly() {
    let out = annealab(&["partition", "--instance", "/nonexistent/weights.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn instance_and_gen_are_mutually_exclusive() {
    let out = annealab(&[
        "partition",
        "--instance",
        "x.json",
        "--gen",
        "uniform-int",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
