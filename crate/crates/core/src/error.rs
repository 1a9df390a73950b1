use alloc::string::String;

use thiserror::Error;

use crate::align::TranslatorError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("duplicate class id `{0}`")]
    DuplicateClass(String),
    #[error("class `{class}` references unknown parent `{parent}`")]
    DanglingParent { class: String, parent: String },
    #[error("cycle detected through class `{0}`")]
    CyclicOntology(String),
    #[error("invalid record `{class}`: {reason}")]
    InvalidRecord { class: String, reason: &'static str },
    #[error("ontology contains no classes")]
    EmptyOntology,
    #[error("unknown class id `{0}`")]
    UnknownClass(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmartIdError {
    #[error("unknown class id `{0}`")]
    UnknownClass(String),
    #[error("unknown path id `{0}`")]
    UnknownPathId(String),
    #[error("`{parent}` has {siblings} children, more than tokens of length {max_len} can address")]
    TokenOverflow {
        parent: String,
        siblings: usize,
        max_len: usize,
    },
    #[error("path cap must be at least 1")]
    ZeroPathCap,
    #[error("malformed path id `{0}`")]
    MalformedPathId(String),
    #[error("inconsistent id table: {0}")]
    InconsistentTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("step {step} outside schedule of {total} steps")]
    StepOutOfRange { step: u64, total: u64 },
    #[error("masking schedule requires 0 < start <= end < 1 and at least one step")]
    InvalidSchedule,
    #[error("masking ratio must lie strictly between 0 and 1")]
    InvalidRatio,
    #[error("instance has no maskable units")]
    EmptyInstance,
    #[error("ontology `{0}` has no matching id table")]
    MissingTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error(transparent)]
    Translator(#[from] TranslatorError),
    #[error("target id space is empty")]
    EmptyTargetSpace,
    #[error("source text is empty")]
    EmptySource,
    #[error("invalid decode configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("unknown class id `{0}`")]
    UnknownClass(String),
    #[error("task `{task}` expects ontology `{expected}`, got `{found}`")]
    TaskMismatch {
        task: String,
        expected: String,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("precision is undefined for an empty output mapping set")]
    PrecisionUndefined,
    #[error("recall is undefined for an empty reference mapping set")]
    RecallUndefined,
    #[error("ranking case for `{0}` lacks a score for every candidate")]
    IncompleteScores(String),
    #[error("no ranking cases")]
    NoCases,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("duplicate mapping pair ({0}, {1})")]
    DuplicatePair(String, String),
    #[error("reference target `{0}` also appears among the negatives")]
    ReferenceInNegatives(String),
}
