//! Line-delimited JSON class files.
//!
//! One object per line:
//! `{"id": "...", "label": "...", "synonyms": [...], "definitions": [...], "parents": [...]}`
//! where only `id` and `label` are required.

use std::path::Path;

use ontomap_core::ontology::{validate_graph, ValidationReport};
use ontomap_core::{ClassRecord, OntologyGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::provenance::{content_lines, read_file};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassLine {
    id: String,
    label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    synonyms: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    definitions: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parents: Vec<String>,
}

/// Parses class records; `origin` names the source in error messages.
pub fn parse_classes(text: &str, origin: &Path) -> Result<Vec<ClassRecord>> {
    content_lines(text)
        .map(|(line_no, line)| {
            let line: ClassLine =
                serde_json::from_str(line).map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            Ok(ClassRecord {
                class_id: line.id,
                label: line.label,
                synonyms: line.synonyms,
                definitions: line.definitions,
                parents: line.parents,
            })
        })
        .collect()
}

pub fn read_classes(path: &Path) -> Result<Vec<ClassRecord>> {
    parse_classes(&read_file(path)?, path)
}

/// Loads and validates an ontology; the first invariant violation is the
/// error.
pub fn load_ontology(path: &Path, ontology_id: &str) -> Result<OntologyGraph> {
    Ok(OntologyGraph::from_records(ontology_id, read_classes(path)?)?)
}

/// Loads an ontology without rejecting invariant violations other than
/// duplicate ids, returning the graph with its validation report.
pub fn inspect_ontology(path: &Path, ontology_id: &str) -> Result<(OntologyGraph, ValidationReport)> {
    let graph = OntologyGraph::assemble(ontology_id, read_classes(path)?)?;
    let report = validate_graph(&graph);
    Ok((graph, report))
}

/// Renders a graph as a class file in class-id order with sorted parents,
/// so equal graphs always serialize to equal bytes.
pub fn render_classes(graph: &OntologyGraph) -> String {
    let mut out = String::new();
    for record in graph.classes() {
        let line = ClassLine {
            id: record.class_id.clone(),
            label: record.label.clone(),
            synonyms: record.synonyms.clone(),
            definitions: record.definitions.clone(),
            parents: graph.parents(&record.class_id).to_vec(),
        };
        out.push_str(&serde_json::to_string(&line).expect("class line serializes"));
        out.push('\n');
    }
    out
}
