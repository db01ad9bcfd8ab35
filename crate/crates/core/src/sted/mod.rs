//! Semantic tree edit distance.
//!
//! Node pairs cost `w_s * (1 - struct_sim) + w_c * (1 - content_sim)`.
//! `struct_sim` is the product of label similarity (normalized keys,
//! embedding cosine) and type agreement; `content_sim` is the scalar rule
//! for leaves and, for containers, the normalized similarity of their
//! optimally matched children. Children are matched with the Hungarian
//! algorithm on a padded square matrix, and each level is scored as
//! `1 - min(1, (matched + lambda * |n1 - n2|) / max(n1, n2))`.

mod engine;
mod report;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::AssignmentError;
use crate::semantic::{EmbeddingContext, ScalarPolicy, SimilarityError};
use crate::tree::{DocumentTree, TreeNode};

use engine::{Engine, Prepared};

/// Child lists wider than this make the cubic matching step expensive.
pub const LARGE_BRANCHING_WARNING: usize = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Structural,
    Semantic,
    #[default]
    Hybrid,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Structural, Mode::Semantic, Mode::Hybrid];

    /// `(w_s, w_c)` preset.
    pub fn weights(self) -> (f64, f64) {
        match self {
            Mode::Structural => (1.0, 0.0),
            Mode::Semantic => (0.0, 1.0),
            Mode::Hybrid => (0.5, 0.5),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Structural => "structural",
            Mode::Semantic => "semantic",
            Mode::Hybrid => "hybrid",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structural" => Ok(Mode::Structural),
            "semantic" => Ok(Mode::Semantic),
            "hybrid" => Ok(Mode::Hybrid),
            other => Err(alloc::format!("unknown mode `{other}`")),
        }
    }
}

/// How an unmatched child subtree is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaddingCost {
    /// `insert_cost` / `delete_cost` once per unmatched child.
    PerSubtree,
    /// The unit cost times the unmatched subtree's node count.
    PerNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StedConfig {
    pub w_s: f64,
    pub w_c: f64,
    pub lambda: f64,
    pub insert_cost: f64,
    pub delete_cost: f64,
    pub padding: PaddingCost,
    pub mode: Mode,
    pub scalar_policy: ScalarPolicy,
}

impl Default for StedConfig {
    fn default() -> Self {
        Self::for_mode(Mode::Hybrid)
    }
}

impl StedConfig {
    pub fn for_mode(mode: Mode) -> Self {
        let (w_s, w_c) = mode.weights();
        StedConfig {
            w_s,
            w_c,
            lambda: 0.1,
            insert_cost: 1.0,
            delete_cost: 1.0,
            padding: PaddingCost::PerSubtree,
            mode,
            scalar_policy: ScalarPolicy::default(),
        }
    }

    /// Switches to `mode`, resetting the weights to its preset.
    pub fn with_mode(mut self, mode: Mode) -> Self {
        let (w_s, w_c) = mode.weights();
        self.mode = mode;
        self.w_s = w_s;
        self.w_c = w_c;
        self
    }

    pub fn validate(&self) -> Result<(), StedError> {
        let bad = |m| Err(StedError::InvalidConfig(m));
        if !(0.0..=1.0).contains(&self.w_s) || !(0.0..=1.0).contains(&self.w_c) {
            return bad("weights must lie in [0, 1]");
        }
        if (self.w_s + self.w_c - 1.0).abs() > 1e-9 {
            return bad("w_s + w_c must equal 1");
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be a finite non-negative number");
        }
        for c in [self.insert_cost, self.delete_cost] {
            if !(c >= 0.0 && c.is_finite()) {
                return bad("insert/delete costs must be finite and non-negative");
            }
        }
        self.scalar_policy.validate().map_err(StedError::InvalidConfig)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StedError {
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Optimal matching of two child lists and the resulting level score.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Perfect matching on the padded square matrix, sorted by left index.
    /// A left index `>= left_len` is an insertion of the right child; a
    /// right index `>= right_len` is a deletion of the left child.
    pub assignment: Vec<(usize, usize)>,
    pub left_len: usize,
    pub right_len: usize,
    pub matched_cost: f64,
    pub unmatched_delta: usize,
    pub level_similarity: f64,
}

impl MatchResult {
    /// Pairs of real children, skipping padding.
    pub fn matched_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().copied().filter(|&(i, j)| i < self.left_len && j < self.right_len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceKind {
    KeyRenamed,
    ValueChanged,
    TypeChanged,
    Missing,
    Extra,
    Restructured,
    /// Only emitted by full reports for pairs that cost nothing.
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Difference {
    pub path: String,
    pub kind: DifferenceKind,
    pub left: Option<String>,
    pub right: Option<String>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    pub score: f64,
    pub mode: String,
    pub differences: Vec<Difference>,
}

/// Compact JSON of a subtree, truncated for reports.
pub fn excerpt_json(node: &TreeNode) -> String {
    report::excerpt(crate::tree::to_json(node))
}

/// `w_s * γ_struct + w_c * γ_content` for one node pair.
pub fn node_update_cost(
    a: &TreeNode,
    b: &TreeNode,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
) -> Result<f64, StedError> {
    config.validate()?;
    let (engine, prepared) = Engine::prepare(config, ctx, &[a, b])?;
    Ok(engine.distance(&prepared[0], &prepared[1]))
}

pub fn optimal_children_matching(
    left: &[TreeNode],
    right: &[TreeNode],
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
) -> Result<MatchResult, StedError> {
    config.validate()?;
    let nodes: Vec<&TreeNode> = left.iter().chain(right).collect();
    let (engine, prepared) = Engine::prepare(config, ctx, &nodes)?;
    let (l, r) = prepared.split_at(left.len());
    Ok(engine.match_children(l, r))
}

/// Document similarity in `[0, 1]` without the difference report.
///
/// Two containers of the same type score as the normalized similarity of
/// their root child lists; any other pair scores `1 - node_update_cost`.
pub fn sted_score(
    t1: &DocumentTree,
    t2: &DocumentTree,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
) -> Result<f64, StedError> {
    config.validate()?;
    let (engine, prepared) = Engine::prepare(config, ctx, &[t1.root(), t2.root()])?;
    Ok(engine.root_score(&prepared[0], &prepared[1]))
}

/// Score plus the path-addressed differences that cost more than 0.05.
pub fn sted_similarity(
    t1: &DocumentTree,
    t2: &DocumentTree,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
) -> Result<SimilarityResult, StedError> {
    similarity_with(t1, t2, config, ctx, false)
}

/// Like [`sted_similarity`]; with `include_unchanged` every matched pair
/// below the reporting threshold is listed too.
pub fn compare_report(
    t1: &DocumentTree,
    t2: &DocumentTree,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
    include_unchanged: bool,
) -> Result<SimilarityResult, StedError> {
    similarity_with(t1, t2, config, ctx, include_unchanged)
}

fn similarity_with(
    t1: &DocumentTree,
    t2: &DocumentTree,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
    include_unchanged: bool,
) -> Result<SimilarityResult, StedError> {
    config.validate()?;
    let (engine, prepared) = Engine::prepare(config, ctx, &[t1.root(), t2.root()])?;
    let score = engine.root_score(&prepared[0], &prepared[1]);
    let differences = report::differences(&engine, &prepared[0], &prepared[1], include_unchanged);
    Ok(SimilarityResult { metric: None, score, mode: String::from(config.mode.as_str()), differences })
}

/// A batch of documents prepared once (labels and leaf texts embedded in a
/// single round) so any pair can be scored without further provider calls.
pub struct PreparedSet<'t> {
    engine: Engine,
    roots: Vec<Prepared<'t>>,
}

impl<'t> PreparedSet<'t> {
    pub fn new(
        trees: &'t [DocumentTree],
        config: &StedConfig,
        ctx: &EmbeddingContext<'_>,
    ) -> Result<Self, StedError> {
        config.validate()?;
        let roots: Vec<&TreeNode> = trees.iter().map(DocumentTree::root).collect();
        let (engine, roots) = Engine::prepare(config, ctx, &roots)?;
        Ok(PreparedSet { engine, roots })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn config(&self) -> &StedConfig {
        &self.engine.config
    }

    /// STED score of documents `i` and `j`. Panics if either is out of range.
    pub fn score(&self, i: usize, j: usize) -> f64 {
        self.engine.root_score(&self.roots[i], &self.roots[j])
    }
}
