use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Capabilities, TaskId, Translator, TranslatorError, END_TOKEN};
use crate::ontology::{record_descriptions, DescriptionOptions, OntologyGraph};
use crate::text::{edit_similarity_chars, normalize_term};
use crate::trie::{NodeId, PathTrie};

pub const DEFAULT_EMBED_DIM: usize = 4096;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

/// Hashed character-trigram counts of `^text$`, L2-normalized.
pub fn trigram_embedding(text: &str, dim: usize) -> Vec<f64> {
    let mut vector = alloc::vec![0.0; dim];
    let chars: Vec<char> = core::iter::once('^')
        .chain(text.chars())
        .chain(core::iter::once('$'))
        .collect();
    let mut buf = [0u8; 12];
    for window in chars.windows(3) {
        let mut len = 0;
        for c in window {
            len += c.encode_utf8(&mut buf[len..]).len();
        }
        vector[(fnv1a(&buf[..len]) % dim as u64) as usize] += 1.0;
    }
    let norm = libm::sqrt(vector.iter().map(|x| x * x).sum::<f64>());
    if norm > 0.0 {
        vector.iter_mut().for_each(|x| *x /= norm);
    }
    vector
}

/// Deterministic stand-in for a trained model. A token scores the best
/// normalized edit similarity between the source and any description of a
/// class reachable through it; [`END_TOKEN`] scores the current class itself.
/// With these scores greedy decoding reaches the global edit-similarity
/// argmax, so driving it through `decode` gives the edit-similarity baseline.
#[derive(Debug, Clone)]
pub struct EditSimilarityTranslator<'a> {
    trie: &'a PathTrie,
    terms: BTreeMap<String, Vec<Vec<char>>>,
    embed_dim: usize,
}

impl<'a> EditSimilarityTranslator<'a> {
    pub fn new(target: &OntologyGraph, trie: &'a PathTrie) -> Self {
        let terms = target
            .classes()
            .map(|record| {
                let set = record_descriptions(record, DescriptionOptions::default());
                let chars = set.iter().map(|t| t.chars().collect()).collect();
                (record.class_id.clone(), chars)
            })
            .collect();
        Self {
            trie,
            terms,
            embed_dim: DEFAULT_EMBED_DIM,
        }
    }

    pub fn with_embed_dim(mut self, dim: usize) -> Self {
        self.embed_dim = dim.max(1);
        self
    }

    /// Best edit similarity between `source` (already normalized) and any
    /// description of `class_id`.
    pub fn class_score(&self, source: &[char], class_id: &str) -> f64 {
        self.terms.get(class_id).map_or(0.0, |terms| {
            terms
                .iter()
                .map(|t| edit_similarity_chars(source, t))
                .fold(0.0, f64::max)
        })
    }

    fn subtree_score<'t>(&'t self, source: &[char], node: NodeId, memo: &mut BTreeMap<&'t str, f64>) -> f64 {
        let mut best: f64 = 0.0;
        for n in self.trie.subtree(node) {
            if let Some(class) = self.trie.terminal(n) {
                let score = *memo.entry(class).or_insert_with(|| self.class_score(source, class));
                best = best.max(score);
            }
        }
        best
    }
}

impl Translator for EditSimilarityTranslator<'_> {
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            score_tokens: true,
            embed: true,
            embed_dim: self.embed_dim,
        }
    }

    fn score_tokens(
        &self,
        _task: &TaskId,
        source: &str,
        prefix: &[&str],
        allowed: &[&str],
    ) -> Result<Vec<f64>, TranslatorError> {
        let node = self.trie.walk(prefix).ok_or_else(|| {
            TranslatorError::new("invalid_prefix", alloc::format!("{prefix:?} is not a valid prefix"))
        })?;
        let source: Vec<char> = normalize_term(source, true).chars().collect();
        let mut memo = BTreeMap::new();
        allowed
            .iter()
            .map(|token| {
                if *token == END_TOKEN {
                    let class = self
                        .trie
                        .terminal(node)
                        .ok_or_else(|| TranslatorError::new("invalid_token", "end offered at a non-class node"))?;
                    Ok(self.class_score(&source, class))
                } else {
                    let child = self.trie.child(node, token).ok_or_else(|| {
                        TranslatorError::new("invalid_token", alloc::format!("`{token}` does not extend the prefix"))
                    })?;
                    Ok(self.subtree_score(&source, child, &mut memo))
                }
            })
            .collect()
    }

    fn embed(&self, _task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError> {
        Ok(trigram_embedding(text, self.embed_dim))
    }
}
