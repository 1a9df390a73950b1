//! Hierarchical path identifiers.
//!
//! Every root-to-class path is rendered as level tokens joined by `-`. A
//! class's token under a given parent is the base-36 ordinal of the class
//! among that parent's children (children sorted by class id). The shortest
//! path of a class, ties broken by rendered form, is its SmartID; the other
//! enumerated paths are its SynonymIDs.
//!
//! The top of the hierarchy is an anchor that has no token of its own: a
//! single root that has children is used as the anchor directly (and so
//! receives no identifier), otherwise a virtual anchor sits above all roots.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::SmartIdError;
use crate::ontology::OntologyGraph;

pub const SEPARATOR: char = '-';
pub const DEFAULT_PATH_CAP: usize = 64;

/// Base-36 rendering (`0-9a-z`) of a sibling ordinal.
pub fn ordinal_token(mut ordinal: usize) -> String {
    const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";
    let mut buf = Vec::new();
    loop {
        buf.push(DIGITS[ordinal % 36]);
        ordinal /= 36;
        if ordinal == 0 {
            break;
        }
    }
    buf.reverse();
    String::from_utf8(buf).expect("ascii digits")
}

fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && token.bytes().all(|b| b.is_ascii_digit() || b.is_ascii_lowercase())
        && (token == "0" || !token.starts_with('0'))
}

/// A rendered path identifier. Ordered by token count, then by rendered form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PathId {
    rendered: String,
    depth: usize,
}

impl PathId {
    pub fn from_token(token: &str) -> Self {
        debug_assert!(is_valid_token(token));
        Self {
            rendered: String::from(token),
            depth: 1,
        }
    }

    pub fn parse(rendered: &str) -> Result<Self, SmartIdError> {
        let mut depth = 0;
        for token in rendered.split(SEPARATOR) {
            if !is_valid_token(token) {
                return Err(SmartIdError::MalformedPathId(rendered.to_string()));
            }
            depth += 1;
        }
        Ok(Self {
            rendered: String::from(rendered),
            depth,
        })
    }

    pub fn from_tokens<I, S>(tokens: I) -> Result<Self, SmartIdError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut rendered = String::new();
        for token in tokens {
            if !rendered.is_empty() {
                rendered.push(SEPARATOR);
            }
            rendered.push_str(token.as_ref());
        }
        Self::parse(&rendered)
    }

    pub fn child(&self, token: &str) -> Self {
        debug_assert!(is_valid_token(token));
        let mut rendered = String::with_capacity(self.rendered.len() + 1 + token.len());
        rendered.push_str(&self.rendered);
        rendered.push(SEPARATOR);
        rendered.push_str(token);
        Self {
            rendered,
            depth: self.depth + 1,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.rendered
    }

    /// Number of level tokens.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.rendered.split(SEPARATOR)
    }

    /// Rendered forms of every strict hyphen-boundary prefix, shortest first.
    pub fn strict_prefixes(&self) -> impl Iterator<Item = &str> {
        self.rendered
            .match_indices(SEPARATOR)
            .map(move |(i, _)| &self.rendered[..i])
    }
}

impl Ord for PathId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth
            .cmp(&other.depth)
            .then_with(|| self.rendered.cmp(&other.rendered))
    }
}

impl PartialOrd for PathId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

impl fmt::Debug for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PathId({})", self.rendered)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmartIdConfig {
    /// Maximum number of paths kept per class.
    pub path_cap: usize,
    /// Longest allowed token; `None` means unbounded.
    pub max_token_len: Option<usize>,
}

impl Default for SmartIdConfig {
    fn default() -> Self {
        Self {
            path_cap: DEFAULT_PATH_CAP,
            max_token_len: None,
        }
    }
}

impl SmartIdConfig {
    pub fn with_path_cap(path_cap: usize) -> Self {
        Self {
            path_cap,
            ..Self::default()
        }
    }
}

/// The single root used as anchor, if the graph has one.
pub fn anchor_class(graph: &OntologyGraph) -> Option<&str> {
    match graph.roots() {
        [root] if !graph.children(root).is_empty() => Some(root.as_str()),
        _ => None,
    }
}

/// Token-assignment context shared by path enumeration and table building.
struct Levels<'g> {
    graph: &'g OntologyGraph,
    anchor: Option<&'g str>,
    /// Token of each root under the virtual anchor.
    root_tokens: BTreeMap<&'g str, String>,
}

impl<'g> Levels<'g> {
    fn new(graph: &'g OntologyGraph, max_token_len: Option<usize>) -> Result<Self, SmartIdError> {
        let anchor = anchor_class(graph);
        if let Some(max_len) = max_token_len {
            let capacity = 36usize.checked_pow(max_len as u32).unwrap_or(usize::MAX);
            let mut groups: Vec<(&str, usize)> = graph
                .classes()
                .map(|c| (c.class_id.as_str(), graph.children(&c.class_id).len()))
                .collect();
            if anchor.is_none() {
                groups.push(("<anchor>", graph.roots().len()));
            }
            if let Some((parent, siblings)) = groups.into_iter().find(|(_, n)| *n > capacity) {
                return Err(SmartIdError::TokenOverflow {
                    parent: parent.to_string(),
                    siblings,
                    max_len,
                });
            }
        }
        let root_tokens = match anchor {
            Some(_) => BTreeMap::new(),
            None => graph
                .roots()
                .iter()
                .enumerate()
                .map(|(i, r)| (r.as_str(), ordinal_token(i)))
                .collect(),
        };
        Ok(Self {
            graph,
            anchor,
            root_tokens,
        })
    }

    /// Sorted, capped paths of `id` given the already computed paths of its
    /// parents.
    fn paths_of(&self, id: &str, known: &BTreeMap<&str, Vec<PathId>>, cap: usize) -> Vec<PathId> {
        if self.anchor == Some(id) {
            return Vec::new();
        }
        let mut out = Vec::new();
        if let Some(token) = self.root_tokens.get(id) {
            out.push(PathId::from_token(token));
        }
        // (paths of one parent, token of `id` under it, next index)
        let mut lists: Vec<(&[PathId], String, usize)> = Vec::new();
        for parent in self.graph.parents(id) {
            let siblings = self.graph.children(parent);
            let ordinal = siblings
                .binary_search_by(|s| s.as_str().cmp(id))
                .expect("child listed under its parent");
            let token = ordinal_token(ordinal);
            if self.anchor == Some(parent.as_str()) {
                out.push(PathId::from_token(&token));
            } else if let Some(parent_paths) = known.get(parent.as_str()) {
                lists.push((parent_paths, token, 0));
            }
        }
        out.sort();
        out.truncate(cap);
        if lists.is_empty() {
            return out;
        }
        // Appending the same token preserves the (depth, rendered) order of
        // the parent paths, so a merge of the parents' sorted lists yields the
        // smallest paths first.
        let mut direct = core::mem::take(&mut out).into_iter().peekable();
        let mut heads: Vec<Option<PathId>> = lists
            .iter()
            .map(|(paths, token, _)| paths.first().map(|p| p.child(token)))
            .collect();
        while out.len() < cap {
            let best = heads
                .iter()
                .enumerate()
                .filter_map(|(i, h)| h.as_ref().map(|h| (i, h)))
                .min_by(|a, b| a.1.cmp(b.1))
                .map(|(i, _)| i);
            let take_direct = match (direct.peek(), best) {
                (Some(d), Some(i)) => d <= heads[i].as_ref().expect("head present"),
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let next = if take_direct {
                direct.next().expect("peeked")
            } else {
                let i = best.expect("a head remains");
                let (paths, token, index) = &mut lists[i];
                *index += 1;
                let next = paths.get(*index).map(|p| p.child(token));
                core::mem::replace(&mut heads[i], next).expect("head present")
            };
            if out.last() != Some(&next) {
                out.push(next);
            }
        }
        out
    }
}

/// Up to `path_cap` distinct paths of `class_id`, shortest first, ties by
/// rendered form. The anchor root has no paths.
pub fn enumerate_paths(graph: &OntologyGraph, class_id: &str, path_cap: usize) -> Result<Vec<PathId>, SmartIdError> {
    if path_cap == 0 {
        return Err(SmartIdError::ZeroPathCap);
    }
    if !graph.contains(class_id) {
        return Err(SmartIdError::UnknownClass(class_id.to_string()));
    }
    let levels = Levels::new(graph, None)?;
    let mut needed = graph.ancestors(class_id);
    needed.insert(class_id);
    let order = graph
        .topological_order()
        .ok_or_else(|| SmartIdError::InconsistentTable("graph is cyclic".to_string()))?;
    let mut known: BTreeMap<&str, Vec<PathId>> = BTreeMap::new();
    for id in order.into_iter().filter(|id| needed.contains(id)) {
        let paths = levels.paths_of(id, &known, path_cap);
        known.insert(id, paths);
    }
    Ok(known.remove(class_id).unwrap_or_default())
}

/// Assigns SmartIDs and SynonymIDs to every class except the anchor root.
pub fn assign_smartids(graph: &OntologyGraph, config: &SmartIdConfig) -> Result<SmartIdTable, SmartIdError> {
    if config.path_cap == 0 {
        return Err(SmartIdError::ZeroPathCap);
    }
    let levels = Levels::new(graph, config.max_token_len)?;
    let order = graph
        .topological_order()
        .ok_or_else(|| SmartIdError::InconsistentTable("graph is cyclic".to_string()))?;
    let mut known: BTreeMap<&str, Vec<PathId>> = BTreeMap::new();
    for id in order {
        let paths = levels.paths_of(id, &known, config.path_cap);
        known.insert(id, paths);
    }
    SmartIdTable::from_entries(
        graph.ontology_id(),
        known.into_iter().filter_map(|(id, mut paths)| {
            if paths.is_empty() {
                return None;
            }
            let smart = paths.remove(0);
            Some((id.to_string(), smart, paths))
        }),
    )
}

/// Bidirectional class ↔ path-id map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmartIdTable {
    ontology_id: String,
    smart_of: BTreeMap<String, PathId>,
    synonyms_of: BTreeMap<String, Vec<PathId>>,
    node_of: BTreeMap<String, String>,
}

impl SmartIdTable {
    /// Builds a table from `(class_id, smart_id, synonym_ids)` entries,
    /// checking that ids are unique across classes, that each SmartID sorts
    /// before all SynonymIDs of its class, and that every strict prefix of an
    /// id is itself an id in the table.
    pub fn from_entries<I>(ontology_id: &str, entries: I) -> Result<Self, SmartIdError>
    where
        I: IntoIterator<Item = (String, PathId, Vec<PathId>)>,
    {
        let mut table = Self {
            ontology_id: ontology_id.to_string(),
            smart_of: BTreeMap::new(),
            synonyms_of: BTreeMap::new(),
            node_of: BTreeMap::new(),
        };
        for (class_id, smart, mut synonyms) in entries {
            synonyms.sort();
            if synonyms.iter().any(|s| *s <= smart) || synonyms.windows(2).any(|w| w[0] == w[1]) {
                return Err(SmartIdError::InconsistentTable(alloc::format!(
                    "class `{class_id}` has a SynonymID not longer than or equal to its SmartID"
                )));
            }
            if table.smart_of.contains_key(&class_id) {
                return Err(SmartIdError::InconsistentTable(alloc::format!(
                    "class `{class_id}` listed twice"
                )));
            }
            for id in core::iter::once(&smart).chain(&synonyms) {
                if let Some(owner) = table.node_of.insert(id.as_str().to_string(), class_id.clone()) {
                    return Err(SmartIdError::InconsistentTable(alloc::format!(
                        "path id `{id}` assigned to both `{owner}` and `{class_id}`"
                    )));
                }
            }
            table.smart_of.insert(class_id.clone(), smart);
            table.synonyms_of.insert(class_id, synonyms);
        }
        // the immediate prefix is an id too, so checking it covers them all
        for rendered in table.node_of.keys() {
            let id = PathId::parse(rendered)?;
            let missing = id
                .strict_prefixes()
                .last()
                .filter(|p| !table.node_of.contains_key(*p))
                .map(String::from);
            if let Some(missing) = missing {
                return Err(SmartIdError::InconsistentTable(alloc::format!(
                    "prefix `{missing}` of `{rendered}` is not an id"
                )));
            }
        }
        Ok(table)
    }

    pub fn ontology_id(&self) -> &str {
        &self.ontology_id
    }

    /// Number of classes with an identifier.
    pub fn len(&self) -> usize {
        self.smart_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.smart_of.is_empty()
    }

    pub fn smart_id(&self, class_id: &str) -> Option<&PathId> {
        self.smart_of.get(class_id)
    }

    pub fn synonym_ids(&self, class_id: &str) -> &[PathId] {
        self.synonyms_of.get(class_id).map_or(&[], Vec::as_slice)
    }

    /// All ids of a class, SmartID first.
    pub fn path_ids(&self, class_id: &str) -> impl Iterator<Item = &PathId> {
        self.smart_of
            .get(class_id)
            .into_iter()
            .chain(self.synonym_ids(class_id))
    }

    /// Owner of a rendered SmartID or SynonymID.
    pub fn resolve(&self, rendered: &str) -> Result<&str, SmartIdError> {
        self.node_of
            .get(rendered)
            .map(String::as_str)
            .ok_or_else(|| SmartIdError::UnknownPathId(rendered.to_string()))
    }

    /// `(class_id, smart_id, synonym_ids)` in class-id order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &PathId, &[PathId])> {
        self.smart_of.iter().map(|(c, s)| (c.as_str(), s, self.synonym_ids(c)))
    }

    /// Every rendered id with its owner, in rendered order.
    pub fn all_ids(&self) -> impl Iterator<Item = (&str, &str)> {
        self.node_of.iter().map(|(p, c)| (p.as_str(), c.as_str()))
    }
}
