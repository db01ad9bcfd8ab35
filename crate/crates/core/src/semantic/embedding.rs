use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SimilarityError;

/// A unit-norm embedding. Cosine similarity is the dot product.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    components: Vec<f32>,
}

impl EmbeddingVector {
    /// Scales `raw` to unit L2 norm. A zero vector maps to the first basis
    /// vector so every text has a defined direction.
    pub fn normalized(raw: &[f64]) -> Self {
        let norm = libm::sqrt(raw.iter().map(|x| x * x).sum::<f64>());
        let components = if norm > 0.0 && norm.is_finite() {
            raw.iter().map(|x| (x / norm) as f32).collect()
        } else {
            let mut v = alloc::vec![0.0f32; raw.len().max(1)];
            v[0] = 1.0;
            v
        };
        EmbeddingVector { components }
    }

    /// Wraps components that are already unit-norm, e.g. a cache record.
    pub fn from_unit_components(components: Vec<f32>) -> Self {
        EmbeddingVector { components }
    }

    pub fn components(&self) -> &[f32] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.components.iter().map(|&x| f64::from(x) * f64::from(x)).sum())
    }

    pub fn cosine(&self, other: &EmbeddingVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| f64::from(a) * f64::from(b))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderKind {
    DeterministicLocal,
    RemoteHttp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingProviderSpec {
    pub provider_id: String,
    pub kind: ProviderKind,
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub model_id: Option<String>,
    pub dimension: usize,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default = "default_max_batch")]
    pub max_batch: usize,
}

fn default_timeout_ms() -> u64 {
    10_000
}

fn default_max_batch() -> usize {
    64
}

impl EmbeddingProviderSpec {
    pub fn deterministic_local() -> Self {
        EmbeddingProviderSpec {
            provider_id: String::from("hashing-local"),
            kind: ProviderKind::DeterministicLocal,
            endpoint: None,
            model_id: Some(String::from("fnv1a-trigram-256")),
            dimension: 256,
            timeout_ms: default_timeout_ms(),
            max_batch: 1024,
        }
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        let problem = match self.kind {
            ProviderKind::DeterministicLocal if self.endpoint.is_some() => {
                Some("deterministic-local provider must not have an endpoint")
            }
            ProviderKind::RemoteHttp if self.endpoint.is_none() => Some("remote-http provider requires an endpoint"),
            _ if self.dimension == 0 => Some("dimension must be positive"),
            _ if self.timeout_ms == 0 => Some("timeout_ms must be positive"),
            _ if self.max_batch == 0 => Some("max_batch must be positive"),
            _ => None,
        };
        match problem {
            Some(msg) => Err(ProviderError::InvalidSpec(String::from(msg))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("embedding provider unavailable: {0}")]
    Unavailable(String),
    #[error("embedding dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid provider spec: {0}")]
    InvalidSpec(String),
}

/// Source of text embeddings. Implementations must be safe to call from
/// several threads at once.
pub trait EmbeddingProvider: Send + Sync {
    fn spec(&self) -> &EmbeddingProviderSpec;

    /// One unit-norm vector per input text, in input order.
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, ProviderError>;
}

/// Persistent or shared storage for embeddings, keyed by provider, model
/// and input text. Entries are never replaced once written.
pub trait VectorCache: Send + Sync {
    fn get(&self, provider: &EmbeddingProviderSpec, text: &str) -> Option<EmbeddingVector>;
    fn put(&self, provider: &EmbeddingProviderSpec, text: &str, vector: &EmbeddingVector);
}

/// Deterministic local embedder: a signed hashed bag of word tokens and
/// boundary-padded character trigrams.
///
/// The text is lowercased and split into maximal alphanumeric runs. Each
/// word `w` contributes the feature `w:<w>`, and each character trigram of
/// `#<w>#` contributes `t:<trigram>`; all weights are 1. A feature is hashed
/// with 64-bit FNV-1a over its UTF-8 bytes; the bucket is `hash % dim` and
/// the sign is negative when bit 32 of the hash is set. The accumulated
/// vector is L2-normalized. Text without any alphanumeric run is treated as
/// a single word made of the whole lowercased text.
#[derive(Debug, Clone)]
pub struct HashingEmbedder {
    spec: EmbeddingProviderSpec,
}

impl Default for HashingEmbedder {
    fn default() -> Self {
        HashingEmbedder { spec: EmbeddingProviderSpec::deterministic_local() }
    }
}

impl HashingEmbedder {
    pub fn with_dimension(dimension: usize) -> Self {
        let mut spec = EmbeddingProviderSpec::deterministic_local();
        spec.dimension = dimension.max(1);
        HashingEmbedder { spec }
    }

    pub fn embed_one(&self, text: &str) -> EmbeddingVector {
        let dim = self.spec.dimension;
        let mut acc = alloc::vec![0.0f64; dim];
        let lowered: String = text.chars().flat_map(char::to_lowercase).collect();
        let mut words: Vec<&str> = lowered.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).collect();
        if words.is_empty() {
            words.push(&lowered);
        }
        let mut feature = String::new();
        for word in words {
            feature.clear();
            feature.push_str("w:");
            feature.push_str(word);
            add_feature(&mut acc, &feature);

            let padded: Vec<char> = core::iter::once('#').chain(word.chars()).chain(core::iter::once('#')).collect();
            for tri in padded.windows(3) {
                feature.clear();
                feature.push_str("t:");
                feature.extend(tri.iter());
                add_feature(&mut acc, &feature);
            }
        }
        EmbeddingVector::normalized(&acc)
    }
}

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn add_feature(acc: &mut [f64], feature: &str) {
    let hash = fnv1a64(feature.as_bytes());
    let bucket = (hash % acc.len() as u64) as usize;
    let sign = if (hash >> 32) & 1 == 1 { -1.0 } else { 1.0 };
    acc[bucket] += sign;
}

impl EmbeddingProvider for HashingEmbedder {
    fn spec(&self) -> &EmbeddingProviderSpec {
        &self.spec
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, ProviderError> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }
}

/// A provider plus an optional cache; the handle every similarity function
/// takes.
#[derive(Clone, Copy)]
pub struct EmbeddingContext<'a> {
    provider: &'a dyn EmbeddingProvider,
    cache: Option<&'a dyn VectorCache>,
}

impl<'a> EmbeddingContext<'a> {
    pub fn new(provider: &'a dyn EmbeddingProvider) -> Self {
        EmbeddingContext { provider, cache: None }
    }

    pub fn with_cache(mut self, cache: &'a dyn VectorCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn provider(&self) -> &'a dyn EmbeddingProvider {
        self.provider
    }

    pub fn embed(&self, text: &str) -> Result<EmbeddingVector, SimilarityError> {
        let mut v = self.embed_many(&[text])?;
        Ok(v.pop().unwrap_or_else(|| EmbeddingVector::normalized(&[])))
    }

    /// Embeds `texts`, consulting the cache first and sending the distinct
    /// misses to the provider in batches of at most `max_batch`.
    pub fn embed_many(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, SimilarityError> {
        if texts.iter().any(|t| t.is_empty()) {
            return Err(SimilarityError::EmptyText);
        }
        let spec = self.provider.spec();
        let mut found: BTreeMap<&str, EmbeddingVector> = BTreeMap::new();
        let mut misses: Vec<&str> = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for &text in texts {
            if !seen.insert(text) {
                continue;
            }
            match self.cache.and_then(|c| c.get(spec, text)) {
                Some(v) => {
                    found.insert(text, v);
                }
                None => misses.push(text),
            }
        }
        for batch in misses.chunks(spec.max_batch.max(1)) {
            let vectors = self.provider.embed_batch(batch)?;
            if vectors.len() != batch.len() {
                return Err(ProviderError::Unavailable(alloc::format!(
                    "provider returned {} vectors for {} texts",
                    vectors.len(),
                    batch.len()
                ))
                .into());
            }
            for (&text, vector) in batch.iter().zip(vectors) {
                if vector.dimension() != spec.dimension {
                    return Err(ProviderError::DimensionMismatch {
                        expected: spec.dimension,
                        actual: vector.dimension(),
                    }
                    .into());
                }
                if let Some(cache) = self.cache {
                    cache.put(spec, text, &vector);
                }
                found.insert(text, vector);
            }
        }
        Ok(texts.iter().map(|t| found[t].clone()).collect())
    }
}
