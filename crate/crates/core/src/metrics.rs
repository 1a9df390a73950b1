//! Global (precision, recall, F) and local (Hits@K, MRR, accuracy) metrics.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::MetricError;

/// Set of `(source, target)` pairs with optional scores.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MappingSet {
    pairs: BTreeMap<(String, String), Option<f64>>,
}

impl MappingSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects a pair that is already present.
    pub fn insert(
        &mut self,
        source: impl Into<String>,
        target: impl Into<String>,
        score: Option<f64>,
    ) -> Result<(), MetricError> {
        let key = (source.into(), target.into());
        if self.pairs.contains_key(&key) {
            return Err(MetricError::DuplicatePair(key.0, key.1));
        }
        self.pairs.insert(key, score);
        Ok(())
    }

    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self, MetricError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut set = Self::new();
        for (s, t) in pairs {
            set.insert(s, t, None)?;
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, source: &str, target: &str) -> bool {
        // BTreeMap<(String, String), _> cannot be probed with borrowed tuples
        self.pairs
            .range((String::from(source), String::from(target))..)
            .next()
            .is_some_and(|((s, t), _)| s == source && t == target)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Option<f64>)> {
        self.pairs
            .iter()
            .map(|((s, t), score)| (s.as_str(), t.as_str(), *score))
    }

    pub fn intersection_len(&self, other: &MappingSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.pairs.keys().filter(|k| large.pairs.contains_key(*k)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

/// `F_beta = (1 + beta^2) P R / (beta^2 P + R)`; zero when `P + R = 0`.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denominator = b2 * precision + recall;
    if denominator == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denominator
    }
}

pub fn precision_recall_f(output: &MappingSet, reference: &MappingSet, beta: f64) -> Result<Prf, MetricError> {
    if output.is_empty() {
        return Err(MetricError::PrecisionUndefined);
    }
    if reference.is_empty() {
        return Err(MetricError::RecallUndefined);
    }
    let hits = output.intersection_len(reference) as f64;
    let precision = hits / output.len() as f64;
    let recall = hits / reference.len() as f64;
    Ok(Prf {
        precision,
        recall,
        f_score: f_beta(precision, recall, beta),
    })
}

/// A reference pair and its negative candidates. `scores[0]` belongs to the
/// reference target, `scores[1..]` to the negatives in order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingCase {
    pub source_id: String,
    pub reference_target_id: String,
    pub negative_targets: Vec<String>,
    pub scores: Option<Vec<f64>>,
}

impl RankingCase {
    pub fn new(
        source_id: impl Into<String>,
        reference_target_id: impl Into<String>,
        negative_targets: Vec<String>,
    ) -> Result<Self, MetricError> {
        let reference_target_id = reference_target_id.into();
        if negative_targets.contains(&reference_target_id) {
            return Err(MetricError::ReferenceInNegatives(reference_target_id));
        }
        Ok(Self {
            source_id: source_id.into(),
            reference_target_id,
            negative_targets,
            scores: None,
        })
    }

    pub fn with_scores(mut self, scores: Vec<f64>) -> Self {
        self.scores = Some(scores);
        self
    }

    /// Reference target followed by the negatives.
    pub fn candidates(&self) -> impl Iterator<Item = &str> {
        core::iter::once(self.reference_target_id.as_str()).chain(self.negative_targets.iter().map(String::as_str))
    }
}

/// 1 + candidates scoring strictly higher than the reference + equally
/// scored candidates whose id sorts before the reference id.
pub fn rank_of(case: &RankingCase) -> Result<usize, MetricError> {
    let incomplete = || MetricError::IncompleteScores(case.source_id.clone());
    let scores = case.scores.as_ref().ok_or_else(incomplete)?;
    if scores.len() != case.negative_targets.len() + 1 || scores.iter().any(|s| s.is_nan()) {
        return Err(incomplete());
    }
    let reference = scores[0];
    let ahead = case
        .negative_targets
        .iter()
        .zip(&scores[1..])
        .filter(|(id, s)| **s > reference || (**s == reference && **id < case.reference_target_id))
        .count();
    Ok(1 + ahead)
}

fn ranks(cases: &[RankingCase]) -> Result<Vec<usize>, MetricError> {
    if cases.is_empty() {
        return Err(MetricError::NoCases);
    }
    cases.iter().map(rank_of).collect()
}

pub fn hits_at_k(cases: &[RankingCase], k: usize) -> Result<f64, MetricError> {
    if k == 0 {
        return Err(MetricError::InvalidK);
    }
    let ranks = ranks(cases)?;
    Ok(ranks.iter().filter(|r| **r <= k).count() as f64 / ranks.len() as f64)
}

pub fn mrr(cases: &[RankingCase]) -> Result<f64, MetricError> {
    let ranks = ranks(cases)?;
    Ok(ranks.iter().map(|r| 1.0 / *r as f64).sum::<f64>() / ranks.len() as f64)
}

/// Share of reference pairs whose source is predicted as their target.
/// Sources without a prediction count as wrong.
pub fn accuracy(predictions: &BTreeMap<String, String>, reference: &MappingSet) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::RecallUndefined);
    }
    let correct = reference
        .iter()
        .filter(|(s, t, _)| predictions.get(*s).is_some_and(|p| p == t))
        .count();
    Ok(correct as f64 / reference.len() as f64)
}
