//! The binary end to end: exit codes, artifact files and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cascade-lab"));
    cmd.args(args);
    if let Some(dir) = out {
        cmd.arg("--out-dir").arg(dir);
    }
    cmd.output().expect("binary runs")
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn validate_haar_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["validate", "haar.json"], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "validate.json");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(json(dir.path(), "failures.json")["failures"], Value::Array(vec![]));
}

#[test]
fn perturbed_mask_lists_its_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["validate", "--filter", "perturbed_haar"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(1));
    let failures = json(dir.path(), "failures.json");
    let names: Vec<_> = failures["failures"].as_array().unwrap().iter().map(|f| f["check"].as_str().unwrap().to_owned()).collect();
    assert!(names.contains(&"validate/qmf".to_owned()), "{names:?}");
}

#[test]
fn filter_file_on_disk_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mine.json");
    fs::write(&path, r#"{"kind":"laurent","offset":0,"scalar":"exact","mask":[[1,1],[0,1],[0,1],[0,1],[0,1],[1,1]]}"#).unwrap();
    let out = lab(&["validate", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("# validate.json"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lab(&["validate", "no_such_filter.json"], None).status.code(), Some(2));
    assert_eq!(lab(&["cascade", "haar", "--start", "triangle"], None).status.code(), Some(2));
    assert_eq!(lab(&["zak-harness", "haar", "--tol", "speed=1"], None).status.code(), Some(2));
    assert_eq!(lab(&["--suite", "nightly"], None).status.code(), Some(2));
    assert_eq!(lab(&[], None).status.code(), Some(2));
    assert_eq!(lab(&["validate", "haar", "--filter", "cubic"], None).status.code(), Some(2));
}

#[test]
fn haar_cascade_from_its_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["cascade", "haar.json", "--start", "box:0,1", "--iters", "8"], Some(dir.path()));
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_path(dir.path().join("trace.csv")).unwrap();
    let col = rdr.headers().unwrap().iter().position(|h| h == "norm_diff_phi").unwrap();
    let values: Vec<f64> = rdr.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    assert_eq!(values, vec![0.0; 9]);
    assert_eq!(json(dir.path(), "verdict.json")["diagnosis"]["verdict"], "converges");
}

#[test]
fn cubic_cascade_reports_failed_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["cascade", "cubic", "--start", "seq:[1]", "--iters", "4"], Some(dir.path()));
    assert!(out.status.success());
    let v = json(dir.path(), "verdict.json");
    assert_eq!(v["diagnosis"]["p2_phi_is_one"], false);
    assert_eq!(v["diagnosis"]["verdict"], Value::Null);
}

#[test]
fn band_cascade_with_gaussian_start() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["cascade", "shannon", "--start", "gauss:1", "--iters", "3", "--window", "9"], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(dir.path(), "verdict.json");
    assert_eq!(v["obstruction"]["verdict"], "below-significance");
}

#[test]
fn ruelle_and_model_check() {
    let dir = tempfile::tempdir().unwrap();
    assert!(lab(&["ruelle", "cubic"], Some(dir.path())).status.success());
    assert!(json(dir.path(), "ruelle.json")["dimension"].as_u64().unwrap() >= 1);
    assert!(lab(&["model-check", "shannon", "--grid", "64", "--trials", "5"], Some(dir.path())).status.success());
    assert_eq!(json(dir.path(), "model_check.json")["grid"], 64);
    assert_eq!(lab(&["ruelle", "cubic", "--degree", "1"], None).status.code(), Some(2));
}

#[test]
fn zak_harness_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["zak-harness", "haar", "--grid", "16,8", "--trials", "4", "--seed", "5"], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(dir.path(), "zak_harness.json");
    assert_eq!(v["harness"]["n_z"], 16);
    assert_eq!(v["isometry"]["box_is_one"], true);
}

#[test]
fn shannon_wold_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(&["wold", "shannon.json", "--kmax", "3", "--window", "16", "--iters", "3"], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(dir.path(), "wold_sets.json");
    assert_eq!(v["sets"]["e"]["period"], serde_json::json!(["4", "1"]));
    assert_eq!(v["sets"]["e"]["intervals"], serde_json::json!([[["1", "1"], ["3", "1"]]]));
    assert_eq!(v["tiling"]["exact"], true);
    let csv = fs::read_to_string(dir.path().join("shannon.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,inf_diff,B_norm,total"));
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(lab(&["wold", "shannon", "--kmax", "3", "--window", "8"], None).status.code(), Some(2));
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn same_seed_same_bytes_across_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["zak-harness", "cubic", "--grid", "16,8", "--trials", "6", "--seed", "11"];
    let run = |dir: &Path, threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_cascade-lab"))
            .args(args)
            .arg("--out-dir")
            .arg(dir)
            .env("CASCADE_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
    };
    run(a.path(), "1");
    run(b.path(), "3");
    assert_eq!(read_all(a.path()), read_all(b.path()));

    let c = tempfile::tempdir().unwrap();
    let mut other = args.to_vec();
    other[7] = "12";
    assert!(lab(&other, Some(c.path())).status.success());
    assert_ne!(read_all(a.path()), read_all(c.path()));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_cascade-lab"))
        .args(["validate", "haar"])
        .env("CASCADE_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
