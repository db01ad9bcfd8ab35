//! Typed tree representation of JSON documents.
//!
//! Objects become internal nodes whose children carry the member key as
//! their label, arrays become internal nodes with unlabeled children in
//! source order, and primitives become leaves. Every node knows its path
//! (`$`, `.key`, `[index]`), which is used only for addressing.

mod parse;
mod stats;
mod write;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use serde::Serialize;

pub use parse::{parse_document, parse_document_with, ParseError, ParseOptions, ParseWarning, Parsed};
pub use stats::{tree_stats, TreeStats};
pub use write::{to_json, to_json_pretty};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeType {
    Object,
    Array,
    String,
    Number,
    Boolean,
    Null,
}

impl NodeType {
    pub fn is_container(self) -> bool {
        matches!(self, NodeType::Object | NodeType::Array)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeType::Object => "object",
            NodeType::Array => "array",
            NodeType::String => "string",
            NodeType::Number => "number",
            NodeType::Boolean => "boolean",
            NodeType::Null => "null",
        }
    }
}

/// A JSON number: the source text plus its normalized numeric value.
///
/// Equality is numeric, so `123` and `123.0` are equal.
#[derive(Debug, Clone)]
pub struct Number {
    text: String,
    value: f64,
}

impl Number {
    /// Builds a number from JSON number text. The caller guarantees the
    /// text follows the JSON number grammar.
    pub(crate) fn from_json_text(text: String) -> Self {
        let value = text.parse::<f64>().unwrap_or(f64::NAN);
        Number { text, value }
    }

    pub fn from_i64(v: i64) -> Self {
        let mut text = String::new();
        let _ = write!(text, "{v}");
        Number { text, value: v as f64 }
    }

    /// Finite values only; non-finite input is clamped to zero since JSON
    /// has no representation for it.
    pub fn from_f64(v: f64) -> Self {
        let v = if v.is_finite() { v } else { 0.0 };
        let mut text = String::new();
        let _ = write!(text, "{v}");
        Number { text, value: v }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    String(String),
    Number(Number),
    Bool(bool),
    Null,
}

impl Scalar {
    pub fn node_type(&self) -> NodeType {
        match self {
            Scalar::String(_) => NodeType::String,
            Scalar::Number(_) => NodeType::Number,
            Scalar::Bool(_) => NodeType::Boolean,
            Scalar::Null => NodeType::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Object(Vec<TreeNode>),
    Array(Vec<TreeNode>),
    Leaf(Scalar),
}

/// One node of a [`DocumentTree`].
///
/// `label` is set iff the parent is an object. Object children always carry
/// distinct labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    label: Option<String>,
    path: String,
    kind: NodeKind,
}

impl TreeNode {
    /// An object node from `(key, value)` entries. Later duplicates replace
    /// the value of the first occurrence.
    pub fn object<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (String, TreeNode)>,
    {
        let mut children: Vec<TreeNode> = Vec::new();
        for (key, mut child) in entries {
            child.label = Some(key);
            match children.iter_mut().find(|c| c.label == child.label) {
                Some(slot) => *slot = child,
                None => children.push(child),
            }
        }
        TreeNode { label: None, path: String::new(), kind: NodeKind::Object(children) }
    }

    pub fn array<I>(items: I) -> Self
    where
        I: IntoIterator<Item = TreeNode>,
    {
        let children = items
            .into_iter()
            .map(|mut c| {
                c.label = None;
                c
            })
            .collect();
        TreeNode { label: None, path: String::new(), kind: NodeKind::Array(children) }
    }

    pub fn leaf(value: Scalar) -> Self {
        TreeNode { label: None, path: String::new(), kind: NodeKind::Leaf(value) }
    }

    pub fn string(s: impl Into<String>) -> Self {
        Self::leaf(Scalar::String(s.into()))
    }

    pub fn number(n: Number) -> Self {
        Self::leaf(Scalar::Number(n))
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn into_kind(self) -> NodeKind {
        self.kind
    }

    pub(crate) fn kind_mut(&mut self) -> &mut NodeKind {
        &mut self.kind
    }

    pub(crate) fn set_label(&mut self, label: String) {
        self.label = Some(label);
    }

    pub fn node_type(&self) -> NodeType {
        match &self.kind {
            NodeKind::Object(_) => NodeType::Object,
            NodeKind::Array(_) => NodeType::Array,
            NodeKind::Leaf(s) => s.node_type(),
        }
    }

    /// Children in source order; empty for leaves.
    pub fn children(&self) -> &[TreeNode] {
        match &self.kind {
            NodeKind::Object(c) | NodeKind::Array(c) => c,
            NodeKind::Leaf(_) => &[],
        }
    }

    pub fn scalar(&self) -> Option<&Scalar> {
        match &self.kind {
            NodeKind::Leaf(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf(_))
    }

    /// Object member by key.
    pub fn get(&self, key: &str) -> Option<&TreeNode> {
        match &self.kind {
            NodeKind::Object(c) => c.iter().find(|n| n.label() == Some(key)),
            _ => None,
        }
    }

    /// Number of nodes in this subtree, including `self`.
    pub fn subtree_size(&self) -> usize {
        1 + self.children().iter().map(TreeNode::subtree_size).sum::<usize>()
    }

    /// Pre-order iterator over this subtree.
    pub fn iter(&self) -> Preorder<'_> {
        Preorder { stack: alloc::vec![self] }
    }

    fn assign_paths(&mut self, path: String) {
        match &mut self.kind {
            NodeKind::Object(children) => {
                for child in children.iter_mut() {
                    let mut p = path.clone();
                    push_key_segment(&mut p, child.label.as_deref().unwrap_or(""));
                    child.assign_paths(p);
                }
            }
            NodeKind::Array(children) => {
                for (i, child) in children.iter_mut().enumerate() {
                    let mut p = path.clone();
                    let _ = write!(p, "[{i}]");
                    child.assign_paths(p);
                }
            }
            NodeKind::Leaf(_) => {}
        }
        self.path = path;
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a TreeNode>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a TreeNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children().iter().rev());
        Some(node)
    }
}

/// Keys that would make the dotted form ambiguous use `["..."]` instead.
fn push_key_segment(path: &mut String, key: &str) {
    let plain = !key.is_empty()
        && key.chars().all(|c| !matches!(c, '.' | '[' | ']' | '"' | '\\') && !c.is_control());
    if plain {
        path.push('.');
        path.push_str(key);
    } else {
        path.push('[');
        write::write_json_string(path, key);
        path.push(']');
    }
}

/// A parsed or generated document with its size metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentTree {
    root: TreeNode,
    node_count: usize,
    max_depth: usize,
    max_branching: usize,
}

impl DocumentTree {
    /// Wraps a root node, assigning paths and computing size metadata.
    pub fn new(mut root: TreeNode) -> Self {
        root.label = None;
        root.assign_paths(String::from("$"));
        let (node_count, max_depth, max_branching) = measure(&root);
        DocumentTree { root, node_count, max_depth, max_branching }
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn into_root(self) -> TreeNode {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Depth of the deepest node; the root alone has depth 1.
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn max_branching(&self) -> usize {
        self.max_branching
    }

    pub fn to_json(&self) -> String {
        to_json(&self.root)
    }

    pub fn to_json_pretty(&self) -> String {
        to_json_pretty(&self.root)
    }
}

fn measure(root: &TreeNode) -> (usize, usize, usize) {
    let mut count = 0;
    let mut depth = 0;
    let mut branching = 0;
    let mut stack = alloc::vec![(root, 1usize)];
    while let Some((node, d)) = stack.pop() {
        count += 1;
        depth = depth.max(d);
        branching = branching.max(node.children().len());
        stack.extend(node.children().iter().map(|c| (c, d + 1)));
    }
    (count, depth, branching)
}
