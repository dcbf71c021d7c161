use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn nevlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nevlab")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const DEGENERATE: &str = r#"schema_version = 1

[[instance]]
name = "degenerate"
tasks = ["smt"]
p = 1
components = [[{ exp = [0], coeff = "1" }], [{ exp = [1], coeff = "1" }], [{ exp = [0], coeff = "2" }, { exp = [1], coeff = "3" }]]
hyperplanes = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "1"]]
"#;

#[test]
fn unknown_flag_exits_one() {
    let out = nevlab(&["--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn fermat_compact_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nevlab(&[
        "--task",
        "fermat-compact",
        "--input",
        fixtures().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let verdicts: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("verdicts.json")).unwrap()).unwrap();
    let results = verdicts["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for r in results {
        assert_eq!(r["task"], "fermat-compact");
        assert_eq!(r["status"], "pass", "{r}");
    }
    assert_eq!(verdicts["schema_version"], 1);
}

#[test]
fn degenerate_smt_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "d.toml", DEGENERATE);
    let out_dir = dir.path().join("out");
    let out = nevlab(&["--task", "smt", "--input", input.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let verdicts: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("verdicts.json")).unwrap()).unwrap();
    let r = &verdicts["results"][0];
    assert_eq!(r["status"], "fail");
    assert_eq!(r["error_kind"], "linearly-degenerate");
    assert!(r["diagnostic"].as_str().unwrap().contains("linearly dependent"));
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert!(summary.contains("FAIL"));
}

#[test]
fn malformed_coefficient_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.toml", &DEGENERATE.replace(r#"coeff = "3""#, r#"coeff = "0.5""#));
    let out = nevlab(&["--input", input.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    let line = DEGENERATE.lines().position(|l| l.contains(r#"coeff = "3""#)).unwrap() + 1;
    let col = DEGENERATE.lines().nth(line - 1).unwrap().find(r#""3""#).unwrap() + 2;
    assert!(err.contains(&format!("bad.toml:{line}:{col}:")), "{err}");
    assert!(err.contains("0.5"), "{err}");
}

#[test]
fn conductor_conflict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "c.toml",
        &DEGENERATE.replace("schema_version = 1\n", "schema_version = 1\nconductor = 8\n"),
    );
    let out = nevlab(&["--input", input.to_str().unwrap(), "--field-order", "4", "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("conductor"));
}

#[test]
fn runs_are_byte_identical_across_job_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let out = nevlab(&[
            "--input",
            fixtures().to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--seed",
            "7",
            "--samples",
            "5000",
            "--jobs",
            jobs,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 2);
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}
