//! Zero-shot matching: trie-constrained decoding (prediction) followed by
//! exact-match and embedding-similarity scoring (validation).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

mod decode;
mod matcher;
mod surrogate;
mod validate;

pub use decode::{decode, softmax, Candidate, DecodeConfig, DecodeMode, Decoded};
pub use matcher::{match_ontologies, MatchConfig, MatchInputs, MatchOutcome, Scoring};
pub use surrogate::{trigram_embedding, EditSimilarityTranslator, DEFAULT_EMBED_DIM};
pub use validate::{cosine, exact_match, score_mapping, similarity_score, ClassRef};

/// Pseudo-token offered at terminal nodes that have children: choosing it
/// stops decoding at the current class.
pub const END_TOKEN: &str = "</s>";

/// Identifies an alignment task, e.g. `snomed2fma_body`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskId {
    pub name: String,
    pub source_ontology_id: String,
    pub target_ontology_id: String,
}

impl TaskId {
    pub fn new(name: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            source_ontology_id: source.into(),
            target_ontology_id: target.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslatorError {
    pub code: String,
    pub message: String,
}

impl TranslatorError {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for TranslatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "translator error [{}]: {}", self.code, self.message)
    }
}

impl core::error::Error for TranslatorError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Capabilities {
    pub score_tokens: bool,
    pub embed: bool,
    pub embed_dim: usize,
}

/// The model behind matching. `score_tokens` returns one finite score per
/// allowed token (higher is better); `embed` returns a fixed-dimension
/// vector that is identical for identical inputs.
pub trait Translator {
    fn capabilities(&self) -> Capabilities;

    fn score_tokens(
        &self,
        task: &TaskId,
        source: &str,
        prefix: &[&str],
        allowed: &[&str],
    ) -> Result<Vec<f64>, TranslatorError>;

    fn embed(&self, task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError>;
}

impl<T: Translator + ?Sized> Translator for &T {
    fn capabilities(&self) -> Capabilities {
        (**self).capabilities()
    }

    fn score_tokens(
        &self,
        task: &TaskId,
        source: &str,
        prefix: &[&str],
        allowed: &[&str],
    ) -> Result<Vec<f64>, TranslatorError> {
        (**self).score_tokens(task, source, prefix, allowed)
    }

    fn embed(&self, task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError> {
        (**self).embed(task, text)
    }
}

/// Wraps a translator and counts calls.
#[derive(Debug, Default)]
pub struct CallCounter<T> {
    inner: T,
    score_calls: AtomicUsize,
    embed_calls: AtomicUsize,
}

impl<T> CallCounter<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            score_calls: AtomicUsize::new(0),
            embed_calls: AtomicUsize::new(0),
        }
    }

    pub fn score_calls(&self) -> usize {
        self.score_calls.load(Ordering::Relaxed)
    }

    pub fn embed_calls(&self) -> usize {
        self.embed_calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.score_calls.store(0, Ordering::Relaxed);
        self.embed_calls.store(0, Ordering::Relaxed);
    }

    pub fn into_inner(self) -> T {
        self.inner
    }
}

impl<T: Translator> Translator for CallCounter<T> {
    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    fn score_tokens(
        &self,
        task: &TaskId,
        source: &str,
        prefix: &[&str],
        allowed: &[&str],
    ) -> Result<Vec<f64>, TranslatorError> {
        self.score_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.score_tokens(task, source, prefix, allowed)
    }

    fn embed(&self, task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError> {
        self.embed_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.embed(task, text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchMethod {
    Exact,
    Similarity,
    Greedy,
}

impl MatchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMethod::Exact => "exact",
            MatchMethod::Similarity => "similarity",
            MatchMethod::Greedy => "greedy",
        }
    }
}

/// One output correspondence with its confidence in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredMapping {
    pub source_id: String,
    pub target_id: String,
    pub score: f64,
    pub method: MatchMethod,
}
