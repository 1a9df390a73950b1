//! Tab-separated mapping, prediction and ranking files.
//!
//! Mapping files have the header `SrcEntity  TgtEntity  Score` (Score may be
//! absent); ranking files have `SrcEntity  TgtEntity  TgtCandidates` and an
//! optional `Scores` column. Candidate and score lists are comma separated
//! and may be wrapped in brackets with quoted items.

use std::collections::BTreeMap;
use std::path::Path;

use ontomap_core::align::ScoredMapping;
use ontomap_core::metrics::{MappingSet, RankingCase};

use crate::error::{Error, Result};
use crate::provenance::content_lines;

pub const MAPPING_HEADER: &str = "SrcEntity\tTgtEntity\tScore";
pub const PREDICTION_HEADER: &str = "SrcEntity\tTgtEntity";

#[derive(Debug, Clone, PartialEq)]
pub struct MappingRow {
    pub line: usize,
    pub source: String,
    pub target: String,
    pub score: Option<f64>,
}

pub fn render_mappings(mappings: &[ScoredMapping]) -> String {
    let mut out = format!("{MAPPING_HEADER}\n");
    for m in mappings {
        out.push_str(&format!("{}\t{}\t{}\n", m.source_id, m.target_id, m.score));
    }
    out
}

pub fn render_predictions(predictions: &BTreeMap<String, String>) -> String {
    let mut out = format!("{PREDICTION_HEADER}\n");
    for (source, target) in predictions {
        out.push_str(&format!("{source}\t{target}\n"));
    }
    out
}

/// Returns the column count of the header after checking the leading
/// column names.
fn check_header(line: Option<(usize, &str)>, expected: &[&str], optional: usize, origin: &Path) -> Result<usize> {
    let Some((line_no, line)) = line else {
        return Err(Error::parse(origin, 1, "missing header line"));
    };
    let columns: Vec<&str> = line.split('\t').map(str::trim).collect();
    let required = expected.len() - optional;
    let ok = columns.len() >= required
        && columns.len() <= expected.len()
        && columns.iter().zip(expected).all(|(c, e)| c == e);
    if !ok {
        return Err(Error::parse(
            origin,
            line_no,
            format!("expected header `{}`", expected.join("\\t")),
        ));
    }
    Ok(columns.len())
}

fn split_row<'a>(line_no: usize, line: &'a str, width: usize, origin: &Path) -> Result<Vec<&'a str>> {
    let cells: Vec<&str> = line.split('\t').collect();
    if cells.len() != width {
        return Err(Error::parse(
            origin,
            line_no,
            format!("expected {width} tab-separated columns, found {}", cells.len()),
        ));
    }
    if cells[..2].iter().any(|c| c.trim().is_empty()) {
        return Err(Error::parse(origin, line_no, "empty entity id"));
    }
    Ok(cells)
}

fn parse_score(cell: &str, line_no: usize, origin: &Path) -> Result<f64> {
    match cell.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(origin, line_no, format!("invalid score `{cell}`"))),
    }
}

/// Parses a mapping or prediction file.
pub fn parse_mappings(text: &str, origin: &Path) -> Result<Vec<MappingRow>> {
    let mut lines = content_lines(text);
    let width = check_header(lines.next(), &["SrcEntity", "TgtEntity", "Score"], 1, origin)?;
    lines
        .map(|(line_no, line)| {
            let cells = split_row(line_no, line, width, origin)?;
            let score = match cells.get(2) {
                Some(cell) => Some(parse_score(cell, line_no, origin)?),
                None => None,
            };
            Ok(MappingRow {
                line: line_no,
                source: cells[0].trim().to_string(),
                target: cells[1].trim().to_string(),
                score,
            })
        })
        .collect()
}

/// Collects rows into a set; a repeated pair is a parse error at its line.
pub fn mapping_set(rows: &[MappingRow], origin: &Path) -> Result<MappingSet> {
    let mut set = MappingSet::new();
    for row in rows {
        set.insert(row.source.clone(), row.target.clone(), row.score)
            .map_err(|e| Error::parse(origin, row.line, e.to_string()))?;
    }
    Ok(set)
}

/// The highest-scored target of every source; ties go to the smaller
/// target id and rows without a score count as 0.
pub fn top_predictions(rows: &[MappingRow]) -> BTreeMap<String, String> {
    let mut best: BTreeMap<&str, (&str, f64)> = BTreeMap::new();
    for row in rows {
        let score = row.score.unwrap_or(0.0);
        let entry = best.entry(&row.source).or_insert((&row.target, score));
        if score > entry.1 || (score == entry.1 && row.target.as_str() < entry.0) {
            *entry = (&row.target, score);
        }
    }
    best.into_iter()
        .map(|(s, (t, _))| (s.to_string(), t.to_string()))
        .collect()
}

fn split_list(cell: &str) -> Vec<String> {
    let trimmed = cell.trim();
    let inner = trimmed
        .strip_prefix(['(', '['])
        .and_then(|s| s.strip_suffix([')', ']']))
        .unwrap_or(trimmed);
    inner
        .split(',')
        .map(|item| item.trim().trim_matches(['\'', '"']).trim().to_string())
        .filter(|item| !item.is_empty())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingFile {
    pub cases: Vec<RankingCase>,
    /// Whether the file carried a Scores column.
    pub scored: bool,
}

/// Parses a ranking file. When the candidate list contains the reference
/// target itself it is dropped from the negatives; that is only allowed
/// without a Scores column, whose values are ordered reference first, then
/// the listed candidates.
pub fn parse_ranking(text: &str, origin: &Path) -> Result<RankingFile> {
    let mut lines = content_lines(text);
    let width = check_header(
        lines.next(),
        &["SrcEntity", "TgtEntity", "TgtCandidates", "Scores"],
        1,
        origin,
    )?;
    let scored = width == 4;
    let cases = lines
        .map(|(line_no, line)| {
            let cells = split_row(line_no, line, width, origin)?;
            let (source, reference) = (cells[0].trim(), cells[1].trim());
            let mut negatives = split_list(cells[2]);
            let scores = if scored {
                let scores = split_list(cells[3])
                    .iter()
                    .map(|s| parse_score(s, line_no, origin))
                    .collect::<Result<Vec<_>>>()?;
                if scores.len() != negatives.len() + 1 {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        format!("{} scores for {} candidates", scores.len(), negatives.len() + 1),
                    ));
                }
                Some(scores)
            } else {
                negatives.retain(|n| n != reference);
                None
            };
            let case = RankingCase::new(source, reference, negatives)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            Ok(match scores {
                Some(s) => case.with_scores(s),
                None => case,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankingFile { cases, scored })
}
