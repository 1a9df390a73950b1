//! TOML run configuration. Keys mirror the command-line flags (with `_`
//! for `-`); a flag given on the command line wins over the file.
//!
//! ```toml
//! seed = 7
//! threshold = 0.85
//! mode = "tm1"
//! decode = "beam"
//! beam_width = 4
//! translator = "wire:127.0.0.1:7000"
//!
//! [tasks.snomed2fma_body]
//! source = "snomed"
//! target = "fma"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::provenance::read_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tm1,
    Tm2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decode {
    Greedy,
    Beam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Pretrain,
    Finetune,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
    pub mode: Option<Mode>,
    pub decode: Option<Decode>,
    pub beam_width: Option<usize>,
    pub temperature: Option<f64>,
    pub max_depth: Option<usize>,
    pub translator: Option<String>,
    pub path_cap: Option<usize>,
    pub singularize: Option<bool>,
    pub try_next_candidate: Option<bool>,
    pub beta: Option<f64>,
    pub k: Option<Vec<usize>>,
    pub exact_override: Option<bool>,
    pub mask_start: Option<f64>,
    pub mask_end: Option<f64>,
    pub mask_steps: Option<u64>,
    pub split: Option<Split>,
    #[serde(default)]
    pub tasks: BTreeMap<String, TaskEntry>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_file(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Where scores come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslatorSpec {
    Edit,
    Wire(String),
}

impl TranslatorSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "edit" => Ok(Self::Edit),
            _ => match spec.strip_prefix("wire:") {
                Some(address) if !address.is_empty() => Ok(Self::Wire(address.to_string())),
                _ => Err(Error::Config(format!(
                    "translator must be `edit` or `wire:<address>`, got `{spec}`"
                ))),
            },
        }
    }
}

impl std::fmt::Display for TranslatorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Edit => f.write_str("edit"),
            Self::Wire(address) => write!(f, "wire:{address}"),
        }
    }
}
