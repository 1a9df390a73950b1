//! Evaluation reports: `key = value` lines with fixed six-decimal numbers.

use std::collections::BTreeMap;

use ontomap_core::metrics::{accuracy, f_beta, hits_at_k, mrr, precision_recall_f, MappingSet, RankingCase};
use ontomap_core::MetricError;

use crate::provenance::{Params, Provenance};

#[derive(Debug, Clone, PartialEq)]
pub struct RankingSummary {
    pub cases: usize,
    pub hits: Vec<(usize, f64)>,
    pub mrr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub output_mappings: usize,
    pub reference_mappings: usize,
    pub true_positives: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_score: Option<f64>,
    pub predicted_sources: usize,
    pub accuracy: Option<f64>,
    pub ranking: Option<RankingSummary>,
}

/// Computes every metric that is defined for the inputs; precision, recall
/// and F are left out when their denominator is empty.
pub fn evaluate(
    output: &MappingSet,
    reference: &MappingSet,
    predictions: &BTreeMap<String, String>,
    ranking: Option<&[RankingCase]>,
    ks: &[usize],
    beta: f64,
) -> Result<EvalReport, MetricError> {
    let true_positives = output.intersection_len(reference);
    let (precision, recall, f_score) = match precision_recall_f(output, reference, beta) {
        Ok(prf) => (Some(prf.precision), Some(prf.recall), Some(prf.f_score)),
        Err(MetricError::PrecisionUndefined) if !reference.is_empty() => {
            (None, Some(true_positives as f64 / reference.len() as f64), None)
        }
        Err(MetricError::RecallUndefined) | Err(MetricError::PrecisionUndefined) => {
            let p = (!output.is_empty()).then(|| true_positives as f64 / output.len() as f64);
            (p, None, None)
        }
        Err(other) => return Err(other),
    };
    let accuracy = match accuracy(predictions, reference) {
        Ok(a) => Some(a),
        Err(MetricError::RecallUndefined) => None,
        Err(other) => return Err(other),
    };
    let ranking = match ranking {
        Some(cases) => Some(RankingSummary {
            cases: cases.len(),
            hits: ks
                .iter()
                .map(|&k| hits_at_k(cases, k).map(|h| (k, h)))
                .collect::<Result<_, _>>()?,
            mrr: mrr(cases)?,
        }),
        None => None,
    };
    debug_assert!(f_score.is_none() || precision.zip(recall).map(|(p, r)| f_beta(p, r, beta)) == f_score);
    Ok(EvalReport {
        output_mappings: output.len(),
        reference_mappings: reference.len(),
        true_positives,
        precision,
        recall,
        f_score,
        predicted_sources: predictions.len(),
        accuracy,
        ranking,
    })
}

fn fixed(value: Option<f64>) -> String {
    value.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"))
}

impl EvalReport {
    pub fn render(&self, provenance: &Provenance, params: &Params) -> String {
        let mut out = provenance.header();
        let mut line = |key: &str, value: String| out.push_str(&format!("{key} = {value}\n"));
        line("output_mappings", self.output_mappings.to_string());
        line("reference_mappings", self.reference_mappings.to_string());
        line("true_positives", self.true_positives.to_string());
        line("precision", fixed(self.precision));
        line("recall", fixed(self.recall));
        line("f_score", fixed(self.f_score));
        line("predicted_sources", self.predicted_sources.to_string());
        line("accuracy", fixed(self.accuracy));
        if let Some(ranking) = &self.ranking {
            line("ranking_cases", ranking.cases.to_string());
            for (k, h) in &ranking.hits {
                line(&format!("hits@{k}"), fixed(Some(*h)));
            }
            line("mrr", fixed(Some(ranking.mrr)));
        }
        for (key, value) in params.iter() {
            line(&format!("config.{key}"), value.to_string());
        }
        out
    }
}
