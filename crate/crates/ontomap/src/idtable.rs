//! SmartID table files: one `{"class_id", "smart_id", "synonym_ids"}`
//! object per line in class-id order.

use std::path::Path;

use ontomap_core::{PathId, SmartIdTable};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::provenance::content_lines;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableLine {
    class_id: String,
    smart_id: String,
    synonym_ids: Vec<String>,
}

pub fn render_table(table: &SmartIdTable) -> String {
    let mut out = String::new();
    for (class_id, smart, synonyms) in table.entries() {
        let line = TableLine {
            class_id: class_id.to_string(),
            smart_id: smart.as_str().to_string(),
            synonym_ids: synonyms.iter().map(|p| p.as_str().to_string()).collect(),
        };
        out.push_str(&serde_json::to_string(&line).expect("table line serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_table(text: &str, ontology_id: &str, origin: &Path) -> Result<SmartIdTable> {
    let mut entries = Vec::new();
    for (line_no, line) in content_lines(text) {
        let bad = |message: String| Error::parse(origin, line_no, message);
        let line: TableLine = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let smart = PathId::parse(&line.smart_id).map_err(|e| bad(e.to_string()))?;
        let synonyms = line
            .synonym_ids
            .iter()
            .map(|s| PathId::parse(s).map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        entries.push((line.class_id, smart, synonyms));
    }
    Ok(SmartIdTable::from_entries(ontology_id, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontomap_core::smartid::{assign_smartids, SmartIdConfig};
    use ontomap_core::{ClassRecord, OntologyGraph};

    #[test]
    fn toy_table_round_trip() {
        let graph = OntologyGraph::from_records(
            "toy",
            vec![
                ClassRecord::new("A", "body wall"),
                ClassRecord::new("B", "thorax"),
                ClassRecord::new("C", "abdominal wall").with_parents(["A"]),
                ClassRecord::new("D", "chest wall").with_parents(["A", "B"]),
            ],
        )
        .unwrap();
        let table = assign_smartids(&graph, &SmartIdConfig::default()).unwrap();
        let text = render_table(&table);
        assert_eq!(
            text,
            concat!(
                "{\"class_id\":\"A\",\"smart_id\":\"0\",\"synonym_ids\":[]}\n",
                "{\"class_id\":\"B\",\"smart_id\":\"1\",\"synonym_ids\":[]}\n",
                "{\"class_id\":\"C\",\"smart_id\":\"0-0\",\"synonym_ids\":[]}\n",
                "{\"class_id\":\"D\",\"smart_id\":\"0-1\",\"synonym_ids\":[\"1-0\"]}\n",
            )
        );
        assert_eq!(parse_table(&text, "toy", Path::new("t")).unwrap(), table);
    }

    #[test]
    fn rejects_bad_ids() {
        let text = "{\"class_id\":\"A\",\"smart_id\":\"00\",\"synonym_ids\":[]}\n";
        assert!(matches!(
            parse_table(text, "x", Path::new("t")),
            Err(Error::Parse { line: 1, .. })
        ));
        let orphan = "{\"class_id\":\"A\",\"smart_id\":\"0-1\",\"synonym_ids\":[]}\n";
        assert!(matches!(
            parse_table(orphan, "x", Path::new("t")),
            Err(Error::SmartId(_))
        ));
    }
}
