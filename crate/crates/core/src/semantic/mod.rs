//! Leaf-level similarity: key normalization, embedding-backed text
//! similarity with chunking for long texts, and type-aware scalar rules.

mod embedding;
mod normalize;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Scalar, TreeNode};

pub use embedding::{
    EmbeddingContext, EmbeddingProvider, EmbeddingProviderSpec, EmbeddingVector, HashingEmbedder, ProviderError,
    ProviderKind, VectorCache,
};
pub use normalize::normalize_field_name;

pub(crate) use embedding::fnv1a64 as fnv1a_hash;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("field name is empty")]
    EmptyName,
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("node is not a primitive leaf")]
    NotALeaf,
    #[error(transparent)]
    Provider(#[from] ProviderError),
}

/// Rules for comparing primitive values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarPolicy {
    /// Cross-type pairs such as `"123"`/`123` score `1 - coercion_penalty`
    /// when their coerced values agree.
    pub coercion_enabled: bool,
    pub coercion_penalty: f64,
    /// Texts shorter than this (in chars) are embedded whole.
    pub string_threshold_chars: usize,
    pub chunk_overlap_chars: usize,
}

impl Default for ScalarPolicy {
    fn default() -> Self {
        ScalarPolicy {
            coercion_enabled: true,
            coercion_penalty: 0.2,
            string_threshold_chars: 300,
            chunk_overlap_chars: 50,
        }
    }
}

impl ScalarPolicy {
    pub fn strict() -> Self {
        ScalarPolicy { coercion_enabled: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if !(0.0..=1.0).contains(&self.coercion_penalty) {
            return Err("coercion_penalty must lie in [0, 1]");
        }
        if self.string_threshold_chars == 0 {
            return Err("string_threshold_chars must be positive");
        }
        if self.chunk_overlap_chars >= self.string_threshold_chars {
            return Err("chunk_overlap_chars must be smaller than string_threshold_chars");
        }
        Ok(())
    }

    /// Agreement factor for two node types' values: 1 for the same type,
    /// `1 - penalty` for coercible-equal primitives, 0 otherwise.
    pub(crate) fn coerced_agreement(&self, a: &Scalar, b: &Scalar) -> f64 {
        if self.coercion_enabled && coercible_equal(a, b) {
            1.0 - self.coercion_penalty
        } else {
            0.0
        }
    }
}

/// Splits `text` into windows of `size` chars that overlap by `overlap`
/// chars. The last window ends at the end of the text.
pub fn chunk_text(text: &str, size: usize, overlap: usize) -> Vec<&str> {
    let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).chain(core::iter::once(text.len())).collect();
    let len = bounds.len() - 1;
    if len <= size {
        return alloc::vec![text];
    }
    let step = size.saturating_sub(overlap).max(1);
    let mut chunks = Vec::new();
    let mut start = 0;
    loop {
        let end = (start + size).min(len);
        chunks.push(&text[bounds[start]..bounds[end]]);
        if end == len {
            break;
        }
        start += step;
    }
    chunks
}

/// The pieces of a string that get embedded: the whole text when short,
/// otherwise its overlapping chunks.
pub(crate) fn text_pieces<'t>(text: &'t str, policy: &ScalarPolicy) -> Vec<&'t str> {
    if text.is_empty() {
        Vec::new()
    } else if text.chars().count() < policy.string_threshold_chars {
        alloc::vec![text]
    } else {
        chunk_text(text, policy.string_threshold_chars, policy.chunk_overlap_chars)
    }
}

/// Similarity of two texts given their embedded pieces.
///
/// Identical texts score exactly 1. Otherwise each piece of the side with
/// more pieces (longer text on ties, both directions averaged when equal)
/// takes its best clamped cosine against the other side, and the scores are
/// averaged. With one piece per side this is the clamped cosine.
pub(crate) fn pieces_similarity(
    a: &str,
    b: &str,
    a_pieces: &[&EmbeddingVector],
    b_pieces: &[&EmbeddingVector],
) -> f64 {
    pieces_similarity_by(
        (a, a.chars().count(), a_pieces.len()),
        (b, b.chars().count(), b_pieces.len()),
        |i, j| a_pieces[i].cosine(b_pieces[j]),
    )
}

/// [`pieces_similarity`] over `(text, char count, piece count)` with a
/// piece cosine callback `cos(i, j)` for piece `i` of `a` and `j` of `b`.
pub(crate) fn pieces_similarity_by(
    a: (&str, usize, usize),
    b: (&str, usize, usize),
    cos: impl Fn(usize, usize) -> f64,
) -> f64 {
    if a.0 == b.0 {
        return 1.0;
    }
    if a.0.is_empty() || b.0.is_empty() {
        return 0.0;
    }
    let (na, nb) = (a.2, b.2);
    let a_over_b = || -> f64 {
        let total: f64 = (0..na).map(|i| (0..nb).map(|j| cos(i, j).max(0.0)).fold(0.0, f64::max)).sum();
        (total / na as f64).min(1.0)
    };
    let b_over_a = || -> f64 {
        let total: f64 = (0..nb).map(|j| (0..na).map(|i| cos(i, j).max(0.0)).fold(0.0, f64::max)).sum();
        (total / nb as f64).min(1.0)
    };
    match na.cmp(&nb).then_with(|| a.1.cmp(&b.1)) {
        core::cmp::Ordering::Greater => a_over_b(),
        core::cmp::Ordering::Less => b_over_a(),
        core::cmp::Ordering::Equal => (a_over_b() + b_over_a()) / 2.0,
    }
}

/// Semantic similarity of two texts in `[0, 1]`.
pub fn text_similarity(a: &str, b: &str, ctx: &EmbeddingContext<'_>, policy: &ScalarPolicy) -> Result<f64, SimilarityError> {
    if a == b {
        return Ok(1.0);
    }
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let pa = text_pieces(a, policy);
    let pb = text_pieces(b, policy);
    let all: Vec<&str> = pa.iter().chain(pb.iter()).copied().collect();
    let vectors = ctx.embed_many(&all)?;
    let refs: Vec<&EmbeddingVector> = vectors.iter().collect();
    let (va, vb) = refs.split_at(pa.len());
    Ok(pieces_similarity(a, b, va, vb))
}

/// Parses a string the way a JSON number would be written.
fn numeric_text(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'+' | b'-' | b'.' | b'e' | b'E')) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Cross-type primitives whose coerced values agree: `"123"`/`123`,
/// `"true"`/`true`, `"null"`/`null` (case-insensitive, trimmed).
pub fn coercible_equal(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::String(s), other) | (other, Scalar::String(s)) => match other {
            Scalar::Number(n) => numeric_text(s) == Some(n.value()),
            Scalar::Bool(v) => s.trim().eq_ignore_ascii_case(if *v { "true" } else { "false" }),
            Scalar::Null => s.trim().eq_ignore_ascii_case("null"),
            Scalar::String(_) => false,
        },
        _ => false,
    }
}

/// Type-aware similarity of two primitive values.
pub fn scalar_pair_similarity(
    a: &Scalar,
    b: &Scalar,
    ctx: &EmbeddingContext<'_>,
    policy: &ScalarPolicy,
) -> Result<f64, SimilarityError> {
    Ok(match (a, b) {
        (Scalar::String(x), Scalar::String(y)) => text_similarity(x, y, ctx, policy)?,
        _ => exact_scalar_similarity(a, b, policy),
    })
}

/// All non-string rules; strings compare by exact equality here.
pub(crate) fn exact_scalar_similarity(a: &Scalar, b: &Scalar, policy: &ScalarPolicy) -> f64 {
    match (a, b) {
        (Scalar::String(x), Scalar::String(y)) => f64::from(u8::from(x == y)),
        (Scalar::Number(x), Scalar::Number(y)) => f64::from(u8::from(x == y)),
        (Scalar::Bool(x), Scalar::Bool(y)) => f64::from(u8::from(x == y)),
        (Scalar::Null, Scalar::Null) => 1.0,
        _ => policy.coerced_agreement(a, b),
    }
}

pub fn scalar_similarity(
    a: &TreeNode,
    b: &TreeNode,
    ctx: &EmbeddingContext<'_>,
    policy: &ScalarPolicy,
) -> Result<f64, SimilarityError> {
    match (a.scalar(), b.scalar()) {
        (Some(x), Some(y)) => scalar_pair_similarity(x, y, ctx, policy),
        _ => Err(SimilarityError::NotALeaf),
    }
}
