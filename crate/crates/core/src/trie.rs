//! Token trie over every SmartID and SynonymID of a table.
//!
//! Nodes are stored in preorder (children visited in token string order),
//! so the subtree below any node is a contiguous index range.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::smartid::{SmartIdTable, SEPARATOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TrieNode {
    token: String,
    parent: usize,
    children: BTreeMap<String, NodeId>,
    terminal: Option<String>,
    depth: usize,
    /// One past the last preorder index in this node's subtree.
    subtree_end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTrie {
    nodes: Vec<TrieNode>,
}

impl PathTrie {
    pub fn build(table: &SmartIdTable) -> Self {
        let mut nodes = alloc::vec![TrieNode {
            token: String::new(),
            parent: 0,
            children: BTreeMap::new(),
            terminal: None,
            depth: 0,
            subtree_end: 0,
        }];
        // Rendered order equals preorder because '-' sorts below every token
        // character, and every prefix of an id is itself an id.
        for (rendered, class_id) in table.all_ids() {
            let (parent, last) = match rendered.rfind(SEPARATOR) {
                Some(i) => (&rendered[..i], &rendered[i + 1..]),
                None => ("", rendered),
            };
            let mut parent_node = NodeId(0);
            if !parent.is_empty() {
                for token in parent.split(SEPARATOR) {
                    parent_node = nodes[parent_node.0].children[token];
                }
            }
            let id = NodeId(nodes.len());
            let depth = nodes[parent_node.0].depth + 1;
            nodes[parent_node.0].children.insert(String::from(last), id);
            nodes.push(TrieNode {
                token: String::from(last),
                parent: parent_node.0,
                children: BTreeMap::new(),
                terminal: Some(String::from(class_id)),
                depth,
                subtree_end: 0,
            });
        }
        for i in (0..nodes.len()).rev() {
            let end = nodes[i]
                .children
                .values()
                .map(|c| nodes[c.0].subtree_end)
                .max()
                .unwrap_or(i + 1);
            nodes[i].subtree_end = end;
        }
        Self { nodes }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    /// True when no id is accepted.
    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn child(&self, node: NodeId, token: &str) -> Option<NodeId> {
        self.nodes[node.0].children.get(token).copied()
    }

    /// Children in token string order.
    pub fn children(&self, node: NodeId) -> impl ExactSizeIterator<Item = (&str, NodeId)> {
        self.nodes[node.0].children.iter().map(|(t, n)| (t.as_str(), *n))
    }

    pub fn child_count(&self, node: NodeId) -> usize {
        self.nodes[node.0].children.len()
    }

    pub fn terminal(&self, node: NodeId) -> Option<&str> {
        self.nodes[node.0].terminal.as_deref()
    }

    /// Number of tokens from the root to `node`.
    pub fn depth(&self, node: NodeId) -> usize {
        self.nodes[node.0].depth
    }

    /// Node reached by a token sequence, if it is a valid prefix.
    pub fn walk<S: AsRef<str>>(&self, tokens: &[S]) -> Option<NodeId> {
        tokens
            .iter()
            .try_fold(self.root(), |node, t| self.child(node, t.as_ref()))
    }

    /// Child tokens that extend a prefix; empty for invalid prefixes.
    pub fn children_of<S: AsRef<str>>(&self, prefix: &[S]) -> Vec<&str> {
        self.walk(prefix)
            .map(|n| self.children(n).map(|(t, _)| t).collect())
            .unwrap_or_default()
    }

    /// Class owning a rendered id.
    pub fn lookup(&self, rendered: &str) -> Option<&str> {
        let tokens: Vec<&str> = rendered.split(SEPARATOR).collect();
        self.walk(&tokens).and_then(|n| self.terminal(n))
    }

    /// Nodes of the subtree rooted at `node`, itself included, in preorder.
    pub fn subtree(&self, node: NodeId) -> impl Iterator<Item = NodeId> {
        (node.0..self.nodes[node.0].subtree_end).map(NodeId)
    }

    /// Rendered path of a node.
    pub fn render(&self, node: NodeId) -> String {
        let mut tokens = Vec::new();
        let mut current = node.0;
        while current != 0 {
            tokens.push(self.nodes[current].token.as_str());
            current = self.nodes[current].parent;
        }
        tokens.reverse();
        tokens.join("-")
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        (node.0 != 0).then(|| NodeId(self.nodes[node.0].parent))
    }

    /// Every accepted id with its class, in preorder.
    pub fn language(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut stack: Vec<(NodeId, String)> = alloc::vec![(self.root(), String::new())];
        while let Some((node, prefix)) = stack.pop() {
            if let Some(class) = self.terminal(node) {
                out.push((prefix.clone(), String::from(class)));
            }
            let children: Vec<_> = self.children(node).collect();
            for (token, child) in children.into_iter().rev() {
                let path = if prefix.is_empty() {
                    String::from(token)
                } else {
                    alloc::format!("{prefix}-{token}")
                };
                stack.push((child, path));
            }
        }
        out
    }
}
