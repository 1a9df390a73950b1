#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn ontomap<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_ontomap"))
        .args(args)
        .output()
        .expect("run ontomap");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy")
}

pub fn golden_path() -> PathBuf {
    toy_dir().join("expected_report.txt")
}

fn step(name: &str, args: &[&str]) -> Result<Output, String> {
    let out = ontomap(args);
    if out.code != 0 {
        return Err(format!("{name} exited {}: {}", out.code, out.stderr));
    }
    Ok(out)
}

/// ingest, smartids, corpus, match (TM1, edit translator) and eval on the
/// bundled toy pair; returns the eval report.
pub fn toy_pipeline(work: &Path) -> Result<String, String> {
    let toy = toy_dir();
    let p = |name: &str| work.join(name).to_str().unwrap().to_string();
    let f = |name: &str| toy.join(name).to_str().unwrap().to_string();
    step(
        "ingest target",
        &[
            "ingest",
            "--classes",
            &f("target.jsonl"),
            "--ontology-id",
            "fma",
            "--out",
            &p("fma.jsonl"),
        ],
    )?;
    step(
        "ingest source",
        &[
            "ingest",
            "--classes",
            &f("source.jsonl"),
            "--ontology-id",
            "snomed",
            "--out",
            &p("snomed.jsonl"),
        ],
    )?;
    step(
        "smartids",
        &[
            "smartids",
            "--classes",
            &p("fma.jsonl"),
            "--ontology-id",
            "fma",
            "--out",
            &p("fma.ids.jsonl"),
        ],
    )?;
    step(
        "corpus",
        &[
            "corpus",
            "--ontology",
            &format!("fma={}", p("fma.jsonl")),
            "--table",
            &format!("fma={}", p("fma.ids.jsonl")),
            "--out-dir",
            &p("corpus"),
            "--seed",
            "7",
        ],
    )?;
    step(
        "match",
        &[
            "match",
            "--task",
            "snomed2fma",
            "--source",
            &p("snomed.jsonl"),
            "--source-id",
            "snomed",
            "--target",
            &p("fma.jsonl"),
            "--target-id",
            "fma",
            "--target-table",
            &p("fma.ids.jsonl"),
            "--mode",
            "tm1",
            "--translator",
            "edit",
            "--out",
            &p("mappings.tsv"),
            "--predictions",
            &p("predictions.tsv"),
        ],
    )?;
    step(
        "eval",
        &[
            "eval",
            "--mappings",
            &p("mappings.tsv"),
            "--reference",
            &f("reference.tsv"),
            "--predictions",
            &p("predictions.tsv"),
            "--ranking",
            &f("ranking.tsv"),
            "--source",
            &p("snomed.jsonl"),
            "--source-id",
            "snomed",
            "--target",
            &p("fma.jsonl"),
            "--target-id",
            "fma",
            "--task",
            "snomed2fma",
            "--out",
            &p("report.txt"),
        ],
    )?;
    std::fs::read_to_string(work.join("report.txt")).map_err(|e| e.to_string())
}
