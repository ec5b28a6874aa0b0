//! `--suite acceptance` through the binary, run twice in separate processes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn suite(dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cascade-lab"))
        .args(["--suite", "acceptance", "--seed", "1", "--out-dir"])
        .arg(dir)
        .output()
        .unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
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
fn suite_artifacts_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = suite(a.path());
    let second = suite(b.path());

    let stdout = String::from_utf8_lossy(&first.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 12, "{stdout}");
    assert_eq!(first.status.code(), second.status.code());

    let (fa, fb) = (files(a.path()), files(b.path()));
    assert_eq!(fa, fb);
    for name in ["criterion_01.json", "criterion_12.json", "shannon.csv", "wold_sets.json", "failures.json"] {
        assert!(fa.iter().any(|(n, _)| n == name), "missing {name}");
    }

    // The exit status agrees with the failure list.
    let failures: serde_json::Value = serde_json::from_slice(&fs::read(a.path().join("failures.json")).unwrap()).unwrap();
    let listed = failures["failures"].as_array().unwrap().len();
    assert_eq!(first.status.success(), listed == 0);
}
