use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{TaskId, Translator, TranslatorError, END_TOKEN};
use crate::error::AlignError;
use crate::trie::{NodeId, PathTrie};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    Greedy,
    Beam,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeConfig {
    pub mode: DecodeMode,
    pub beam_width: usize,
    pub temperature: f64,
    pub max_depth: usize,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            mode: DecodeMode::Greedy,
            beam_width: 4,
            temperature: 1.0,
            max_depth: 64,
        }
    }
}

impl DecodeConfig {
    pub fn greedy() -> Self {
        Self::default()
    }

    pub fn beam(beam_width: usize) -> Self {
        Self {
            mode: DecodeMode::Beam,
            beam_width,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), AlignError> {
        if self.beam_width == 0 {
            return Err(AlignError::InvalidConfig("beam width must be at least 1"));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(AlignError::InvalidConfig("temperature must be positive"));
        }
        if self.max_depth == 0 {
            return Err(AlignError::InvalidConfig("max depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub class_id: String,
    /// Rendered path id the decoder produced.
    pub path: String,
    /// Product of the per-step probabilities along the path.
    pub path_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// Best first; one entry per class.
    pub candidates: Vec<Candidate>,
    pub score_calls: usize,
}

impl Decoded {
    pub fn best(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
}

/// Temperature-scaled softmax.
pub fn softmax(scores: &[f64], temperature: f64) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| libm::exp((s - max) / temperature)).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the first maximum.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

/// Choices at one trie node: `END_TOKEN` first when the node is a class,
/// then the child tokens in string order.
fn options(trie: &PathTrie, node: NodeId) -> Vec<(&str, Option<NodeId>)> {
    let mut out = Vec::with_capacity(trie.child_count(node) + 1);
    if trie.terminal(node).is_some() {
        out.push((END_TOKEN, None));
    }
    out.extend(trie.children(node).map(|(t, n)| (t, Some(n))));
    out
}

struct Step<'t> {
    options: Vec<(&'t str, Option<NodeId>)>,
    /// Raw translator scores; `None` when the single option is forced.
    scores: Option<Vec<f64>>,
    probs: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn step<'t, T: Translator + ?Sized>(
    translator: &T,
    trie: &'t PathTrie,
    task: &TaskId,
    source: &str,
    prefix: &[&'t str],
    node: NodeId,
    temperature: f64,
    calls: &mut usize,
) -> Result<Step<'t>, AlignError> {
    let options = options(trie, node);
    if options.len() == 1 {
        return Ok(Step {
            options,
            scores: None,
            probs: alloc::vec![1.0],
        });
    }
    let allowed: Vec<&str> = options.iter().map(|(t, _)| *t).collect();
    *calls += 1;
    let scores = translator.score_tokens(task, source, prefix, &allowed)?;
    if scores.len() != allowed.len() || scores.iter().any(|s| !s.is_finite()) {
        return Err(TranslatorError::new(
            "bad_response",
            alloc::format!("expected {} finite scores, got {}", allowed.len(), scores.len()),
        )
        .into());
    }
    let probs = softmax(&scores, temperature);
    Ok(Step {
        options,
        scores: Some(scores),
        probs,
    })
}

/// Decodes a path id for `source` through the trie. Only children of the
/// current node (plus [`END_TOKEN`] at class nodes) are ever offered to the
/// translator, so every result is an id of the target. Steps with a single
/// option are taken without a translator call.
pub fn decode<T: Translator + ?Sized>(
    translator: &T,
    trie: &PathTrie,
    task: &TaskId,
    source: &str,
    config: &DecodeConfig,
) -> Result<Decoded, AlignError> {
    config.validate()?;
    if trie.is_empty() {
        return Err(AlignError::EmptyTargetSpace);
    }
    if source.trim().is_empty() {
        return Err(AlignError::EmptySource);
    }
    match config.mode {
        DecodeMode::Greedy => greedy(translator, trie, task, source, config),
        DecodeMode::Beam => beam(translator, trie, task, source, config),
    }
}

fn finish(trie: &PathTrie, node: NodeId, score: f64) -> Candidate {
    Candidate {
        class_id: String::from(trie.terminal(node).expect("decoding stops at class nodes")),
        path: trie.render(node),
        path_score: score,
    }
}

fn greedy<T: Translator + ?Sized>(
    translator: &T,
    trie: &PathTrie,
    task: &TaskId,
    source: &str,
    config: &DecodeConfig,
) -> Result<Decoded, AlignError> {
    let mut calls = 0;
    let mut node = trie.root();
    let mut prefix: Vec<&str> = Vec::new();
    let mut score = 1.0;
    loop {
        if trie.depth(node) >= config.max_depth {
            break;
        }
        let step = step(
            translator,
            trie,
            task,
            source,
            &prefix,
            node,
            config.temperature,
            &mut calls,
        )?;
        // argmax on raw scores so that temperature cannot change the choice
        let choice = step.scores.as_deref().map_or(0, argmax);
        score *= step.probs[choice];
        match step.options[choice] {
            (_, None) => break,
            (token, Some(child)) => {
                prefix.push(token);
                node = child;
            }
        }
    }
    Ok(Decoded {
        candidates: alloc::vec![finish(trie, node, score)],
        score_calls: calls,
    })
}

struct Hypothesis<'t> {
    node: NodeId,
    prefix: Vec<&'t str>,
    score: f64,
}

fn by_score_then_path(a: &Candidate, b: &Candidate) -> Ordering {
    b.path_score
        .partial_cmp(&a.path_score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.path.cmp(&b.path))
}

fn beam<T: Translator + ?Sized>(
    translator: &T,
    trie: &PathTrie,
    task: &TaskId,
    source: &str,
    config: &DecodeConfig,
) -> Result<Decoded, AlignError> {
    let mut calls = 0;
    let mut finished: Vec<Candidate> = Vec::new();
    let mut live = alloc::vec![Hypothesis {
        node: trie.root(),
        prefix: Vec::new(),
        score: 1.0,
    }];
    while !live.is_empty() {
        let mut next: Vec<Hypothesis<'_>> = Vec::new();
        for hyp in live {
            if trie.depth(hyp.node) >= config.max_depth {
                finished.push(finish(trie, hyp.node, hyp.score));
                continue;
            }
            let step = step(
                translator,
                trie,
                task,
                source,
                &hyp.prefix,
                hyp.node,
                config.temperature,
                &mut calls,
            )?;
            for ((token, child), p) in step.options.iter().zip(&step.probs) {
                let score = hyp.score * p;
                match child {
                    None => finished.push(finish(trie, hyp.node, score)),
                    Some(child) => {
                        let mut prefix = hyp.prefix.clone();
                        prefix.push(token);
                        next.push(Hypothesis {
                            node: *child,
                            prefix,
                            score,
                        });
                    }
                }
            }
        }
        next.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.prefix.cmp(&b.prefix))
        });
        next.truncate(config.beam_width);
        live = next;
    }
    finished.sort_by(by_score_then_path);
    let mut seen = alloc::collections::BTreeSet::new();
    finished.retain(|c| seen.insert(c.class_id.clone()));
    Ok(Decoded {
        candidates: finished,
        score_calls: calls,
    })
}
