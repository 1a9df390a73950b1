//! Immutable ontology graphs and per-class description sets.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::OntologyError;
use crate::text::{normalize_term, singularize};

/// One class as it appears in a class file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    pub class_id: String,
    pub label: String,
    pub synonyms: Vec<String>,
    pub definitions: Vec<String>,
    pub parents: Vec<String>,
}

impl ClassRecord {
    pub fn new(class_id: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            class_id: class_id.into(),
            label: label.into(),
            synonyms: Vec::new(),
            definitions: Vec::new(),
            parents: Vec::new(),
        }
    }

    pub fn with_parents<I, S>(mut self, parents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.parents = parents.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_synonyms<I, S>(mut self, synonyms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.synonyms = synonyms.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_definitions<I, S>(mut self, definitions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.definitions = definitions.into_iter().map(Into::into).collect();
        self
    }

    /// Label followed by synonyms, in record order.
    pub fn descriptions(&self) -> impl Iterator<Item = &str> {
        core::iter::once(self.label.as_str()).chain(self.synonyms.iter().map(String::as_str))
    }
}

/// Class graph keyed by class id. Parent and child lists are kept sorted by
/// class id so that everything derived from the graph is independent of the
/// order records were read in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyGraph {
    ontology_id: String,
    classes: BTreeMap<String, ClassRecord>,
    roots: Vec<String>,
    child_index: BTreeMap<String, Vec<String>>,
}

impl OntologyGraph {
    /// Builds a validated graph. Fails with the first invariant violation
    /// found by [`validate_graph`].
    pub fn from_records<I>(ontology_id: impl Into<String>, records: I) -> Result<Self, OntologyError>
    where
        I: IntoIterator<Item = ClassRecord>,
    {
        let graph = Self::assemble(ontology_id, records)?;
        match validate_graph(&graph).errors.into_iter().next() {
            Some(err) => Err(err),
            None => Ok(graph),
        }
    }

    /// Indexes records without checking graph invariants; only duplicate ids
    /// are rejected since they cannot be represented. Parent lists are sorted
    /// and deduplicated.
    pub fn assemble<I>(ontology_id: impl Into<String>, records: I) -> Result<Self, OntologyError>
    where
        I: IntoIterator<Item = ClassRecord>,
    {
        let mut classes = BTreeMap::new();
        for mut record in records {
            record.parents.sort();
            record.parents.dedup();
            if classes.contains_key(&record.class_id) {
                return Err(OntologyError::DuplicateClass(record.class_id));
            }
            classes.insert(record.class_id.clone(), record);
        }

        let mut child_index: BTreeMap<String, Vec<String>> =
            classes.keys().map(|id| (id.clone(), Vec::new())).collect();
        let mut roots = Vec::new();
        // BTreeMap iteration is sorted, so every child list comes out sorted.
        for (id, record) in &classes {
            if record.parents.is_empty() {
                roots.push(id.clone());
            }
            for parent in &record.parents {
                if let Some(children) = child_index.get_mut(parent) {
                    children.push(id.clone());
                }
            }
        }

        Ok(Self {
            ontology_id: ontology_id.into(),
            classes,
            roots,
            child_index,
        })
    }

    pub fn ontology_id(&self) -> &str {
        &self.ontology_id
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, class_id: &str) -> bool {
        self.classes.contains_key(class_id)
    }

    pub fn class(&self, class_id: &str) -> Option<&ClassRecord> {
        self.classes.get(class_id)
    }

    pub fn try_class(&self, class_id: &str) -> Result<&ClassRecord, OntologyError> {
        self.class(class_id)
            .ok_or_else(|| OntologyError::UnknownClass(String::from(class_id)))
    }

    /// Classes in class-id order.
    pub fn classes(&self) -> impl ExactSizeIterator<Item = &ClassRecord> {
        self.classes.values()
    }

    pub fn roots(&self) -> &[String] {
        &self.roots
    }

    pub fn children(&self, class_id: &str) -> &[String] {
        self.child_index.get(class_id).map_or(&[], Vec::as_slice)
    }

    pub fn parents(&self, class_id: &str) -> &[String] {
        self.classes.get(class_id).map_or(&[], |c| c.parents.as_slice())
    }

    /// Parent-before-child order (Kahn's algorithm, ties by class id), or
    /// `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<&str>> {
        let (order, _) = self.kahn();
        (order.len() == self.classes.len()).then_some(order)
    }

    fn kahn(&self) -> (Vec<&str>, BTreeMap<&str, usize>) {
        let mut pending: BTreeMap<&str, usize> = self
            .classes
            .values()
            .map(|c| {
                let known = c.parents.iter().filter(|p| self.contains(p)).count();
                (c.class_id.as_str(), known)
            })
            .collect();
        let mut queue: VecDeque<&str> = pending.iter().filter(|(_, n)| **n == 0).map(|(id, _)| *id).collect();
        let mut order = Vec::with_capacity(self.classes.len());
        while let Some(id) = queue.pop_front() {
            order.push(id);
            for child in self.children(id) {
                let n = pending.get_mut(child.as_str()).expect("child indexed");
                *n -= 1;
                if *n == 0 {
                    queue.push_back(child.as_str());
                }
            }
        }
        pending.retain(|_, n| *n > 0);
        (order, pending)
    }

    /// All strict ancestors of `class_id` (excluding itself).
    pub fn ancestors(&self, class_id: &str) -> BTreeSet<&str> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = self.parents(class_id).iter().map(String::as_str).collect();
        while let Some(id) = stack.pop() {
            if self.contains(id) && seen.insert(id) {
                stack.extend(self.parents(id).iter().map(String::as_str));
            }
        }
        seen
    }
}

/// Summary statistics plus every invariant violation found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub classes: usize,
    pub roots: usize,
    pub multi_parent: usize,
    pub max_depth: usize,
    pub errors: Vec<OntologyError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks graph invariants. Never fails; violations are listed in the
/// report. `max_depth` is the longest root-to-class edge count over the
/// acyclic part of the graph.
pub fn validate_graph(graph: &OntologyGraph) -> ValidationReport {
    let mut report = ValidationReport {
        classes: graph.len(),
        roots: graph.roots.len(),
        multi_parent: graph.classes().filter(|c| c.parents.len() > 1).count(),
        ..ValidationReport::default()
    };
    if graph.is_empty() {
        report.errors.push(OntologyError::EmptyOntology);
        return report;
    }

    for record in graph.classes() {
        if record.label.trim().is_empty() {
            report.errors.push(OntologyError::InvalidRecord {
                class: record.class_id.clone(),
                reason: "label is empty",
            });
        }
        for parent in &record.parents {
            if !graph.contains(parent) {
                report.errors.push(OntologyError::DanglingParent {
                    class: record.class_id.clone(),
                    parent: parent.clone(),
                });
            }
        }
    }

    let (order, stuck) = graph.kahn();
    if !stuck.is_empty() {
        report
            .errors
            .push(OntologyError::CyclicOntology(String::from(cycle_member(graph, &stuck))));
    }

    let mut depth: BTreeMap<&str, usize> = BTreeMap::new();
    for id in &order {
        let d = graph
            .parents(id)
            .iter()
            .filter_map(|p| depth.get(p.as_str()))
            .map(|d| d + 1)
            .max()
            .unwrap_or(0);
        report.max_depth = report.max_depth.max(d);
        depth.insert(id, d);
    }
    report
}

/// Smallest class id on some cycle among the classes Kahn's algorithm could
/// not place.
fn cycle_member<'a>(graph: &'a OntologyGraph, stuck: &BTreeMap<&'a str, usize>) -> &'a str {
    let start = *stuck.keys().next().expect("non-empty");
    let mut walk: Vec<&str> = Vec::new();
    let mut current = start;
    loop {
        if let Some(pos) = walk.iter().position(|id| *id == current) {
            return walk[pos..].iter().min().copied().unwrap_or(current);
        }
        walk.push(current);
        current = graph
            .parents(current)
            .iter()
            .map(String::as_str)
            .find(|p| stuck.contains_key(p))
            .expect("every stuck class has a stuck parent");
    }
}

/// Normalized label and synonym set of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionSet {
    pub owner: String,
    pub terms: BTreeSet<String>,
}

impl DescriptionSet {
    pub fn intersects(&self, other: &DescriptionSet) -> bool {
        // iterate the smaller side
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        small.iter().any(|t| large.contains(t))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescriptionOptions {
    pub singularize: bool,
    pub case_fold: bool,
}

impl Default for DescriptionOptions {
    fn default() -> Self {
        Self {
            singularize: false,
            case_fold: true,
        }
    }
}

impl DescriptionOptions {
    pub fn singular(singularize: bool) -> Self {
        Self {
            singularize,
            ..Self::default()
        }
    }
}

/// Builds the normalized description set of one record.
pub fn record_descriptions(record: &ClassRecord, options: DescriptionOptions) -> DescriptionSet {
    let mut terms = BTreeSet::new();
    for term in record.descriptions() {
        let normalized = normalize_term(term, options.case_fold);
        if normalized.is_empty() {
            continue;
        }
        if options.singularize {
            terms.insert(singularize(&normalized));
        }
        terms.insert(normalized);
    }
    DescriptionSet {
        owner: record.class_id.clone(),
        terms,
    }
}

pub fn description_set(
    graph: &OntologyGraph,
    class_id: &str,
    options: DescriptionOptions,
) -> Result<DescriptionSet, OntologyError> {
    Ok(record_descriptions(graph.try_class(class_id)?, options))
}
