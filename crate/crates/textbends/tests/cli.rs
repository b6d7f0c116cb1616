//! Black-box tests of the binary: exit codes, stdout contracts, and error
//! reporting. Exit codes: 0 success, 1 usage/config, 2 data, 3 divergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_textbends"))
}

fn generate(dir: &Path, sf: &str, seed: &str) -> PathBuf {
    let out = dir.join(format!("corpus-{sf}-{seed}.jsonl"));
    let output = bin()
        .args(["generate", "--sf", sf, "--seed", seed, "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    out
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn no_arguments_is_usage_error() {
    let output = bin().output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let output = bin().arg(flag).output().unwrap();
        assert_eq!(output.status.code(), Some(0), "{flag}");
    }
}

#[test]
fn zero_scale_factor_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["generate", "--sf", "0", "--out"])
        .arg(dir.path().join("c.jsonl"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("sf"));
}

#[test]
fn generate_writes_corpus_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0002", "42");
    let manifest = dir.path().join("corpus-0.0002-42.manifest.json");
    assert!(corpus.exists());
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(parsed["document_count"], 200);
    assert_eq!(parsed["seed"], 42);
    assert!(parsed["checksum"].as_str().unwrap().len() == 64);
}

#[test]
fn missing_corpus_file_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["run", "--out"])
        .arg(dir.path().join("r.json"))
        .arg("--corpus")
        .arg(dir.path().join("nonexistent.jsonl"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_jsonl_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0001", "42");
    let mut text = fs::read_to_string(&corpus).unwrap();
    text.push_str("{ this is not json\n");
    let broken = dir.path().join("broken.jsonl");
    fs::write(&broken, text).unwrap();

    let output = bin()
        .args(["ingest", "--out"])
        .arg(dir.path().join("canonical.jsonl"))
        .arg("--input")
        .arg(&broken)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("101"), "stderr: {}", stderr(&output));
}

#[test]
fn verify_prints_pass_per_spec() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0002", "42");
    let output = bin().args(["verify", "--corpus"]).arg(&corpus).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(stdout.matches("PASS").count(), 33); // 32 specs + summary
    assert!(stdout.contains("all 32 specs PASS"));
}

#[test]
fn verify_guard_rejects_large_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0002", "42");
    let output = bin()
        .args(["verify", "--max-docs", "10", "--corpus"])
        .arg(&corpus)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("200"));
}

#[test]
fn run_then_report_covers_all_formats() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0002", "42");
    let report = dir.path().join("report.json");
    let output = bin()
        .args(["run", "--warm-runs", "2", "--schemes", "tfidf", "--out"])
        .arg(&report)
        .arg("--corpus")
        .arg(&corpus)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    for format in ["json", "csv", "plotdata"] {
        let out = dir.path().join(format!("report.{format}"));
        let output = bin()
            .args(["report", "--format", format, "--out"])
            .arg(&out)
            .arg("--input")
            .arg(&report)
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "{format}");
        assert!(fs::metadata(&out).unwrap().len() > 0);
    }

    let output = bin()
        .args(["report", "--format", "yaml", "--out"])
        .arg(dir.path().join("report.yaml"))
        .arg("--input")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn sweep_rejects_descending_scale_factors() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["sweep", "--sf-list", "0.002,0.001", "--out"])
        .arg(dir.path().join("sweep.json"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn export_emits_nine_files_importable_elsewhere() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate(dir.path(), "0.0001", "42");
    let export = dir.path().join("snowflake");
    let output = bin()
        .args(["export", "--out-dir"])
        .arg(&export)
        .arg("--corpus")
        .arg(&corpus)
        .output()
        .unwrap();
    assert!(output.status.success());
    let mut files: Vec<String> = fs::read_dir(&export)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files.len(), 9, "{files:?}");
}
