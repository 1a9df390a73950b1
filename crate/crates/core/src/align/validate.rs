use alloc::vec::Vec;

use super::{MatchMethod, ScoredMapping, TaskId, Translator, TranslatorError};
use crate::error::AlignError;
use crate::ontology::{record_descriptions, DescriptionOptions, DescriptionSet, OntologyGraph};

/// `Some(1.0)` when the two description sets share a term.
pub fn exact_match(source: &DescriptionSet, target: &DescriptionSet) -> Option<f64> {
    source.intersects(target).then_some(1.0)
}

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum();
    let nb: f64 = b.iter().map(|x| x * x).sum();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (libm::sqrt(na) * libm::sqrt(nb))
}

/// Maximum cosine similarity over all description pairs, clamped to `[0, 1]`.
pub fn similarity_score<T: Translator + ?Sized>(
    translator: &T,
    task: &TaskId,
    source: &DescriptionSet,
    target: &DescriptionSet,
) -> Result<f64, TranslatorError> {
    let embed_all = |set: &DescriptionSet| -> Result<Vec<Vec<f64>>, TranslatorError> {
        set.iter().map(|t| translator.embed(task, t)).collect()
    };
    let source_vectors = embed_all(source)?;
    let target_vectors = embed_all(target)?;
    let mut best: f64 = 0.0;
    for s in &source_vectors {
        for t in &target_vectors {
            if s.len() != t.len() {
                return Err(TranslatorError::new("bad_response", "embeddings differ in dimension"));
            }
            best = best.max(cosine(s, t));
        }
    }
    Ok(best.clamp(0.0, 1.0))
}

/// A class within its ontology.
#[derive(Debug, Clone, Copy)]
pub struct ClassRef<'a> {
    pub graph: &'a OntologyGraph,
    pub class_id: &'a str,
}

impl<'a> ClassRef<'a> {
    pub fn new(graph: &'a OntologyGraph, class_id: &'a str) -> Self {
        Self { graph, class_id }
    }

    fn descriptions(&self, options: DescriptionOptions) -> Result<DescriptionSet, AlignError> {
        self.graph
            .class(self.class_id)
            .map(|record| record_descriptions(record, options))
            .ok_or_else(|| AlignError::UnknownClass(self.class_id.into()))
    }
}

/// Validation score of a predicted pair: 1 when the description sets
/// intersect, otherwise the embedding similarity.
pub fn score_mapping<T: Translator + ?Sized>(
    translator: &T,
    task: &TaskId,
    source: ClassRef<'_>,
    predicted: ClassRef<'_>,
    options: DescriptionOptions,
) -> Result<ScoredMapping, AlignError> {
    let source_terms = source.descriptions(options)?;
    let target_terms = predicted.descriptions(options)?;
    let (score, method) = match exact_match(&source_terms, &target_terms) {
        Some(score) => (score, MatchMethod::Exact),
        None => (
            similarity_score(translator, task, &source_terms, &target_terms)?,
            MatchMethod::Similarity,
        ),
    };
    Ok(ScoredMapping {
        source_id: source.class_id.into(),
        target_id: predicted.class_id.into(),
        score,
        method,
    })
}
