//! Corpus files (`{"task_tag", "input", "target"}` per line) and the
//! manifest describing a set of splits.

use std::collections::BTreeMap;

use ontomap_core::corpus::{CorpusInstance, MaskingSchedule};
use serde::{Deserialize, Serialize};

use crate::provenance::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusLine {
    pub task_tag: String,
    pub input: String,
    pub target: String,
}

impl From<&CorpusInstance> for CorpusLine {
    fn from(instance: &CorpusInstance) -> Self {
        Self {
            task_tag: instance.task_tag.clone(),
            input: instance.input_text.clone(),
            target: instance.target_text.clone(),
        }
    }
}

pub fn render_corpus<'a>(instances: impl IntoIterator<Item = &'a CorpusInstance>) -> String {
    let mut out = String::new();
    for instance in instances {
        out.push_str(&serde_json::to_string(&CorpusLine::from(instance)).expect("corpus line serializes"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub start_ratio: f64,
    pub end_ratio: f64,
    pub total_steps: u64,
}

impl From<&MaskingSchedule> for ScheduleEntry {
    fn from(s: &MaskingSchedule) -> Self {
        Self {
            start_ratio: s.start_ratio,
            end_ratio: s.end_ratio,
            total_steps: s.total_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub file: String,
    pub records: usize,
    /// Hash of the file contents, header included.
    pub sha256: String,
    pub counts: BTreeMap<String, usize>,
}

impl SplitEntry {
    pub fn new<'a>(file: &str, contents: &str, instances: impl IntoIterator<Item = &'a CorpusInstance>) -> Self {
        let mut counts = BTreeMap::new();
        let mut records = 0;
        for instance in instances {
            *counts.entry(instance.task_tag.clone()).or_insert(0) += 1;
            records += 1;
        }
        Self {
            file: file.to_string(),
            records,
            sha256: sha256_hex(contents.as_bytes()),
            counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub schedule: ScheduleEntry,
    pub splits: BTreeMap<String, SplitEntry>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest serializes");
        out.push('\n');
        out
    }
}
