//! Memoized embeddings. The translator contract makes `embed` a pure
//! function of its input within a session, so repeated texts are served
//! from memory.

use std::collections::HashMap;
use std::sync::Mutex;

use ontomap_core::align::{Capabilities, TaskId, Translator, TranslatorError};

pub struct EmbedCache<T> {
    inner: T,
    vectors: Mutex<HashMap<(String, String), Vec<f64>>>,
}

impl<T: Translator> EmbedCache<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            vectors: Mutex::new(HashMap::new()),
        }
    }

    pub fn cached(&self) -> usize {
        self.vectors.lock().unwrap_or_else(|p| p.into_inner()).len()
    }
}

impl<T: Translator> Translator for EmbedCache<T> {
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
        self.inner.score_tokens(task, source, prefix, allowed)
    }

    fn embed(&self, task: &TaskId, text: &str) -> Result<Vec<f64>, TranslatorError> {
        let key = (task.name.clone(), text.to_string());
        if let Some(v) = self.vectors.lock().unwrap_or_else(|p| p.into_inner()).get(&key) {
            return Ok(v.clone());
        }
        let v = self.inner.embed(task, text)?;
        self.vectors
            .lock()
            .unwrap_or_else(|p| p.into_inner())
            .insert(key, v.clone());
        Ok(v)
    }
}
