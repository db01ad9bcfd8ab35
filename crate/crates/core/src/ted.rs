//! Ordered, exact-label baseline.
//!
//! Children are compared by position (index `i` against index `i`, the
//! overflow is inserted or deleted), labels and values must match exactly,
//! and each level is normalized the same way as STED so the two scores are
//! comparable.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::sted::{Difference, DifferenceKind, SimilarityResult};
use crate::tree::{to_json, DocumentTree, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TedConfig {
    pub insert_cost: f64,
    pub delete_cost: f64,
    /// Cost of relabeling a node whose type, label or value differs.
    pub update_cost: f64,
    pub lambda: f64,
}

impl Default for TedConfig {
    fn default() -> Self {
        TedConfig { insert_cost: 1.0, delete_cost: 1.0, update_cost: 1.0, lambda: 0.1 }
    }
}

fn same_container(a: &TreeNode, b: &TreeNode) -> bool {
    a.node_type() == b.node_type() && a.node_type().is_container()
}

/// Exact relabel cost: zero iff type, label and value all match.
fn relabel(a: &TreeNode, b: &TreeNode, config: &TedConfig) -> f64 {
    if a.node_type() == b.node_type() && a.label() == b.label() && a.scalar() == b.scalar() {
        0.0
    } else {
        config.update_cost
    }
}

/// Pair distance in `[0, 1]`. Containers of one type split the cost evenly
/// between their own relabel and the dissimilarity of their children.
fn distance(a: &TreeNode, b: &TreeNode, config: &TedConfig) -> f64 {
    if same_container(a, b) {
        let own = relabel(a, b, config);
        ((own + (1.0 - level(a.children(), b.children(), config))) / 2.0).min(1.0)
    } else {
        relabel(a, b, config).min(1.0)
    }
}

fn level(left: &[TreeNode], right: &[TreeNode], config: &TedConfig) -> f64 {
    let max = left.len().max(right.len());
    if max == 0 {
        return 1.0;
    }
    let common = left.len().min(right.len());
    let mut cost: f64 = left.iter().zip(right).map(|(a, b)| distance(a, b, config)).sum();
    cost += (left.len() - common) as f64 * config.delete_cost;
    cost += (right.len() - common) as f64 * config.insert_cost;
    let delta = left.len().abs_diff(right.len()) as f64;
    let ratio = (cost + config.lambda * delta) / max as f64;
    (1.0 - ratio.min(1.0)).clamp(0.0, 1.0)
}

pub fn ted_similarity(t1: &DocumentTree, t2: &DocumentTree, config: &TedConfig) -> f64 {
    let (a, b) = (t1.root(), t2.root());
    if same_container(a, b) {
        level(a.children(), b.children(), config)
    } else {
        (1.0 - distance(a, b, config)).clamp(0.0, 1.0)
    }
}

/// TED score with a positional difference report.
pub fn ted_report(t1: &DocumentTree, t2: &DocumentTree, config: &TedConfig) -> SimilarityResult {
    let mut differences = Vec::new();
    let (a, b) = (t1.root(), t2.root());
    if same_container(a, b) {
        walk_level(a.children(), b.children(), config, &mut differences);
    } else {
        walk_pair(a, b, config, &mut differences);
    }
    differences.sort_by(|x, y| x.path.cmp(&y.path).then(x.kind.cmp(&y.kind)));
    SimilarityResult {
        metric: Some(String::from("ted")),
        score: ted_similarity(t1, t2, config),
        mode: String::from("exact"),
        differences,
    }
}

fn walk_level(left: &[TreeNode], right: &[TreeNode], config: &TedConfig, out: &mut Vec<Difference>) {
    for (a, b) in left.iter().zip(right) {
        walk_pair(a, b, config, out);
    }
    let common = left.len().min(right.len());
    for a in &left[common..] {
        out.push(Difference {
            path: a.path().into(),
            kind: DifferenceKind::Missing,
            left: Some(crate::sted::excerpt_json(a)),
            right: None,
            cost: config.delete_cost,
        });
    }
    for b in &right[common..] {
        out.push(Difference {
            path: b.path().into(),
            kind: DifferenceKind::Extra,
            left: None,
            right: Some(crate::sted::excerpt_json(b)),
            cost: config.insert_cost,
        });
    }
}

fn walk_pair(a: &TreeNode, b: &TreeNode, config: &TedConfig, out: &mut Vec<Difference>) {
    let d = distance(a, b, config);
    if d == 0.0 {
        return;
    }
    if same_container(a, b) {
        if a.label() != b.label() {
            out.push(Difference {
                path: a.path().into(),
                kind: DifferenceKind::KeyRenamed,
                left: a.label().map(String::from),
                right: b.label().map(String::from),
                cost: config.update_cost / 2.0,
            });
        }
        walk_level(a.children(), b.children(), config, out);
        return;
    }
    let kind = if a.node_type().is_container() || b.node_type().is_container() {
        DifferenceKind::Restructured
    } else if a.node_type() != b.node_type() {
        DifferenceKind::TypeChanged
    } else if a.label() != b.label() {
        DifferenceKind::KeyRenamed
    } else {
        DifferenceKind::ValueChanged
    };
    out.push(Difference {
        path: a.path().into(),
        kind,
        left: Some(to_json(a)),
        right: Some(to_json(b)),
        cost: d,
    });
}
