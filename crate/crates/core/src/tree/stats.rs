use alloc::collections::BTreeMap;

use serde::Serialize;

use super::{DocumentTree, NodeKind, NodeType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub node_count: usize,
    pub max_depth: usize,
    pub max_branching: usize,
    /// Object members across the whole tree.
    pub field_count: usize,
    pub type_histogram: BTreeMap<NodeType, usize>,
}

pub fn tree_stats(tree: &DocumentTree) -> TreeStats {
    let mut field_count = 0;
    let mut type_histogram = BTreeMap::new();
    for node in tree.root().iter() {
        *type_histogram.entry(node.node_type()).or_insert(0) += 1;
        if let NodeKind::Object(children) = node.kind() {
            field_count += children.len();
        }
    }
    TreeStats {
        node_count: tree.node_count(),
        max_depth: tree.max_depth(),
        max_branching: tree.max_branching(),
        field_count,
        type_histogram,
    }
}
