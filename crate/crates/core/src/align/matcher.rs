use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{
    decode, score_mapping, ClassRef, DecodeConfig, MatchMethod, ScoredMapping, TaskId, Translator, TranslatorError,
};
use crate::error::AlignError;
use crate::ontology::{DescriptionOptions, OntologyGraph};
use crate::trie::PathTrie;

/// How a decoded candidate is scored before thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scoring {
    /// Exact description match, else embedding similarity.
    Tm1,
    /// Greedy path probability.
    Tm2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    pub decode: DecodeConfig,
    /// A mapping is kept iff its score is strictly greater.
    pub threshold: f64,
    pub scoring: Scoring,
    pub descriptions: DescriptionOptions,
    /// With beam decoding, try lower-ranked candidates when the best one
    /// fails the threshold.
    pub try_next_candidate: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            decode: DecodeConfig::default(),
            threshold: 0.80,
            scoring: Scoring::Tm1,
            descriptions: DescriptionOptions::singular(true),
            try_next_candidate: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MatchInputs<'a> {
    pub source: &'a OntologyGraph,
    pub target: &'a OntologyGraph,
    pub trie: &'a PathTrie,
    pub task: &'a TaskId,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchOutcome {
    /// Mappings above the threshold, sorted by (source, target).
    pub mappings: Vec<ScoredMapping>,
    /// Top decoded class of every source, before thresholding.
    pub predictions: BTreeMap<String, String>,
    /// Sources skipped because the translator failed.
    pub failures: Vec<(String, TranslatorError)>,
    pub score_calls: usize,
}

/// Matches every source class by decoding its label against the target trie
/// and scoring the result. Translator failures for a source are recorded and
/// matching continues.
pub fn match_ontologies<T: Translator + ?Sized>(
    translator: &T,
    inputs: MatchInputs<'_>,
    config: &MatchConfig,
) -> Result<MatchOutcome, AlignError> {
    config.decode.validate()?;
    check_task(inputs.task, inputs.source, |t| &t.source_ontology_id)?;
    check_task(inputs.task, inputs.target, |t| &t.target_ontology_id)?;
    if inputs.trie.is_empty() {
        return Err(AlignError::EmptyTargetSpace);
    }

    let mut outcome = MatchOutcome::default();
    for record in inputs.source.classes() {
        match match_one(translator, &inputs, config, &record.class_id, &record.label) {
            Ok((prediction, mapping, calls)) => {
                outcome.score_calls += calls;
                if let Some(target) = prediction {
                    outcome.predictions.insert(record.class_id.clone(), target);
                }
                outcome.mappings.extend(mapping);
            }
            Err(AlignError::Translator(err)) => outcome.failures.push((record.class_id.clone(), err)),
            Err(err) => return Err(err),
        }
    }
    outcome
        .mappings
        .sort_by(|a, b| (&a.source_id, &a.target_id).cmp(&(&b.source_id, &b.target_id)));
    Ok(outcome)
}

fn check_task(task: &TaskId, graph: &OntologyGraph, expected: impl Fn(&TaskId) -> &String) -> Result<(), AlignError> {
    if expected(task) != graph.ontology_id() {
        return Err(AlignError::TaskMismatch {
            task: task.name.clone(),
            expected: expected(task).clone(),
            found: graph.ontology_id().into(),
        });
    }
    Ok(())
}

type OneMatch = (Option<String>, Option<ScoredMapping>, usize);

fn match_one<T: Translator + ?Sized>(
    translator: &T,
    inputs: &MatchInputs<'_>,
    config: &MatchConfig,
    source_id: &str,
    label: &str,
) -> Result<OneMatch, AlignError> {
    let decoded = decode(translator, inputs.trie, inputs.task, label.trim(), &config.decode)?;
    let prediction = decoded.best().map(|c| c.class_id.clone());
    let tries = if config.try_next_candidate {
        decoded.candidates.len()
    } else {
        1
    };
    for candidate in decoded.candidates.iter().take(tries) {
        let mapping = match config.scoring {
            Scoring::Tm2 => ScoredMapping {
                source_id: source_id.into(),
                target_id: candidate.class_id.clone(),
                score: candidate.path_score,
                method: MatchMethod::Greedy,
            },
            Scoring::Tm1 => score_mapping(
                translator,
                inputs.task,
                ClassRef::new(inputs.source, source_id),
                ClassRef::new(inputs.target, &candidate.class_id),
                config.descriptions,
            )?,
        };
        if mapping.score > config.threshold {
            return Ok((prediction, Some(mapping), decoded.score_calls));
        }
    }
    Ok((prediction, None, decoded.score_calls))
}
