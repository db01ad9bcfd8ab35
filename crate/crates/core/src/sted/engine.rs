use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::assignment::{hungarian_solve, CostMatrix};
use crate::semantic::{
    exact_scalar_similarity, normalize_field_name, pieces_similarity_by, text_pieces, EmbeddingContext,
    EmbeddingVector,
};
use crate::tree::{NodeKind, Scalar, TreeNode};

use super::{MatchResult, PaddingCost, StedConfig, StedError};

/// A tree node annotated with everything pair costs need: embedding
/// indices, subtree size and a content hash for the identity shortcut.
pub(crate) struct Prepared<'t> {
    pub node: &'t TreeNode,
    label: Option<Label>,
    text: Option<Text>,
    pub children: Vec<Prepared<'t>>,
    size: usize,
    hash: u64,
}

struct Label {
    normalized: String,
    vector: Option<usize>,
}

struct Text {
    pieces: Vec<usize>,
    chars: usize,
}

/// Non-zero components of an embedding, in ascending index order. Dot
/// products over these add the same non-zero terms in the same order as the
/// dense loop, so they agree bit for bit.
struct Sparse {
    index: Vec<u32>,
    value: Vec<f32>,
}

impl Sparse {
    fn new(v: &EmbeddingVector) -> Self {
        let mut index = Vec::new();
        let mut value = Vec::new();
        for (i, &c) in v.components().iter().enumerate() {
            if c != 0.0 {
                index.push(i as u32);
                value.push(c);
            }
        }
        Sparse { index, value }
    }

    fn dot(&self, other: &Sparse) -> f64 {
        let (mut i, mut j, mut sum) = (0, 0, 0.0f64);
        while i < self.index.len() && j < other.index.len() {
            match self.index[i].cmp(&other.index[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    sum += f64::from(self.value[i]) * f64::from(other.value[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

pub(crate) struct Engine {
    pub config: StedConfig,
    vectors: Vec<Sparse>,
}

struct Collector<'c> {
    config: &'c StedConfig,
    texts: BTreeMap<String, usize>,
}

impl Collector<'_> {
    fn intern(&mut self, text: &str) -> usize {
        let next = self.texts.len();
        *self.texts.entry(String::from(text)).or_insert(next)
    }

    fn prepare<'t>(&mut self, node: &'t TreeNode) -> Prepared<'t> {
        let label = match node.label() {
            Some(raw) if self.config.w_s > 0.0 => {
                let normalized = normalize_field_name(raw).unwrap_or_default();
                let vector = (!normalized.is_empty()).then(|| self.intern(&normalized));
                Some(Label { normalized, vector })
            }
            Some(raw) => Some(Label { normalized: String::from(raw), vector: None }),
            None => None,
        };
        let text = match node.scalar() {
            Some(Scalar::String(s)) if self.config.w_c > 0.0 => {
                let pieces = text_pieces(s, &self.config.scalar_policy);
                Some(Text { pieces: pieces.into_iter().map(|p| self.intern(p)).collect(), chars: s.chars().count() })
            }
            _ => None,
        };
        let children: Vec<Prepared<'t>> = node.children().iter().map(|c| self.prepare(c)).collect();
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        let hash = node_hash(node, &children);
        Prepared { node, label, text, children, size, hash }
    }
}

fn mix(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(17)
}

fn bytes_hash(bytes: &[u8]) -> u64 {
    crate::semantic::fnv1a_hash(bytes)
}

fn node_hash(node: &TreeNode, children: &[Prepared<'_>]) -> u64 {
    let mut h = bytes_hash(node.label().unwrap_or("\u{0}").as_bytes());
    h = mix(h, node.node_type() as u64);
    match node.kind() {
        NodeKind::Leaf(Scalar::String(s)) => h = mix(h, bytes_hash(s.as_bytes())),
        NodeKind::Leaf(Scalar::Number(n)) => h = mix(h, (n.value() + 0.0).to_bits()),
        NodeKind::Leaf(Scalar::Bool(b)) => h = mix(h, u64::from(*b)),
        NodeKind::Leaf(Scalar::Null) => {}
        NodeKind::Object(_) => {
            // Member order does not matter for objects.
            let mut acc = 0u64;
            for c in children {
                acc = acc.wrapping_add(c.hash);
            }
            h = mix(h, acc);
        }
        NodeKind::Array(_) => {
            let mut acc = 0u64;
            for c in children {
                acc = acc.wrapping_add(c.hash.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            }
            h = mix(h, acc);
        }
    }
    h
}

impl Engine {
    /// Annotates `roots` and embeds every label and string piece they
    /// contain in one provider round.
    pub fn prepare<'t>(
        config: &StedConfig,
        ctx: &EmbeddingContext<'_>,
        roots: &[&'t TreeNode],
    ) -> Result<(Engine, Vec<Prepared<'t>>), StedError> {
        let mut collector = Collector { config, texts: BTreeMap::new() };
        let prepared: Vec<Prepared<'t>> = roots.iter().map(|r| collector.prepare(r)).collect();
        let mut ordered: Vec<(&str, usize)> = collector.texts.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        ordered.sort_unstable_by_key(|&(_, i)| i);
        let texts: Vec<&str> = ordered.into_iter().map(|(t, _)| t).collect();
        let vectors = if texts.is_empty() { Vec::new() } else { ctx.embed_many(&texts)? };
        let vectors = vectors.iter().map(Sparse::new).collect();
        Ok((Engine { config: *config, vectors }, prepared))
    }

    fn label_similarity(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        match (&a.label, &b.label) {
            (None, None) => 1.0,
            (Some(x), Some(y)) if x.normalized == y.normalized => 1.0,
            (Some(x), Some(y)) => match (x.vector, y.vector) {
                (Some(i), Some(j)) => self.vectors[i].dot(&self.vectors[j]).clamp(0.0, 1.0),
                _ => 0.0,
            },
            _ => 0.0,
        }
    }

    fn type_agreement(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        if a.node.node_type() == b.node.node_type() {
            return 1.0;
        }
        match (a.node.scalar(), b.node.scalar()) {
            (Some(x), Some(y)) => self.config.scalar_policy.coerced_agreement(x, y),
            _ => 0.0,
        }
    }

    pub fn struct_similarity(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        self.label_similarity(a, b) * self.type_agreement(a, b)
    }

    pub fn content_similarity(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        match (a.node.scalar(), b.node.scalar()) {
            (Some(Scalar::String(x)), Some(Scalar::String(y))) => match (&a.text, &b.text) {
                (Some(ta), Some(tb)) => pieces_similarity_by(
                    (x, ta.chars, ta.pieces.len()),
                    (y, tb.chars, tb.pieces.len()),
                    |i, j| self.vectors[ta.pieces[i]].dot(&self.vectors[tb.pieces[j]]),
                ),
                _ => f64::from(u8::from(x == y)),
            },
            (Some(x), Some(y)) => exact_scalar_similarity(x, y, &self.config.scalar_policy),
            (None, None) => self.level_similarity(&a.children, &b.children),
            _ => 0.0,
        }
    }

    fn identical(a: &Prepared<'_>, b: &Prepared<'_>) -> bool {
        a.hash == b.hash && a.node.label() == b.node.label() && a.node.kind() == b.node.kind()
    }

    /// Update distance of a node pair, in `[0, 1]`.
    pub fn distance(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        if Self::identical(a, b) {
            return 0.0;
        }
        let c = &self.config;
        let mut d = 0.0;
        if c.w_s > 0.0 {
            d += c.w_s * (1.0 - self.struct_similarity(a, b));
        }
        if c.w_c > 0.0 {
            d += c.w_c * (1.0 - self.content_similarity(a, b));
        }
        d
    }

    fn pad_cost(&self, unit: f64, node: &Prepared<'_>) -> f64 {
        match self.config.padding {
            PaddingCost::PerSubtree => unit,
            PaddingCost::PerNode => unit * node.size as f64,
        }
    }

    pub fn cost_matrix(&self, left: &[Prepared<'_>], right: &[Prepared<'_>]) -> CostMatrix {
        CostMatrix::padded(
            left.len(),
            right.len(),
            |i, j| self.distance(&left[i], &right[j]),
            |j| self.pad_cost(self.config.insert_cost, &right[j]),
            |i| self.pad_cost(self.config.delete_cost, &left[i]),
        )
        .expect("distances and validated unit costs are finite")
    }

    pub fn match_children(&self, left: &[Prepared<'_>], right: &[Prepared<'_>]) -> MatchResult {
        let max = left.len().max(right.len());
        let unmatched_delta = left.len().abs_diff(right.len());
        if max == 0 {
            return MatchResult {
                assignment: Vec::new(),
                left_len: 0,
                right_len: 0,
                matched_cost: 0.0,
                unmatched_delta,
                level_similarity: 1.0,
            };
        }
        let matrix = self.cost_matrix(left, right);
        let solved = hungarian_solve(&matrix);
        let level_similarity = self.normalize(solved.total_cost, unmatched_delta, max);
        MatchResult {
            assignment: solved.pairs,
            left_len: left.len(),
            right_len: right.len(),
            matched_cost: solved.total_cost,
            unmatched_delta,
            level_similarity,
        }
    }

    fn normalize(&self, matched: f64, delta: usize, max: usize) -> f64 {
        let ratio = (matched + self.config.lambda * delta as f64) / max as f64;
        (1.0 - ratio.min(1.0)).clamp(0.0, 1.0)
    }

    pub fn level_similarity(&self, left: &[Prepared<'_>], right: &[Prepared<'_>]) -> f64 {
        if left.is_empty() && right.is_empty() {
            return 1.0;
        }
        if left.len() == right.len() && left.iter().zip(right).all(|(a, b)| Self::identical(a, b)) {
            return 1.0;
        }
        self.match_children(left, right).level_similarity
    }

    pub fn root_score(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> f64 {
        let same_container = a.node.node_type() == b.node.node_type() && a.node.node_type().is_container();
        if same_container {
            self.level_similarity(&a.children, &b.children)
        } else {
            (1.0 - self.distance(a, b)).clamp(0.0, 1.0)
        }
    }

    /// `(structural, content)` weighted cost components of a pair.
    pub fn components(&self, a: &Prepared<'_>, b: &Prepared<'_>) -> (f64, f64) {
        if Self::identical(a, b) {
            return (0.0, 0.0);
        }
        let c = &self.config;
        let s = if c.w_s > 0.0 { c.w_s * (1.0 - self.struct_similarity(a, b)) } else { 0.0 };
        let t = if c.w_c > 0.0 { c.w_c * (1.0 - self.content_similarity(a, b)) } else { 0.0 };
        (s, t)
    }
}
