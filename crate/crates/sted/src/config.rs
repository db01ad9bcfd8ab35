//! The JSON run configuration. Every field is optional; command-line flags
//! override the file.
//!
//! ```json
//! {
//!   "mode": "hybrid",
//!   "weights": { "structural": 0.5, "content": 0.5 },
//!   "lambda": 0.1,
//!   "alpha": 20,
//!   "coercion": { "enabled": true, "penalty": 0.2 },
//!   "provider": { "provider_id": "hashing-local", "kind": "deterministic-local", "dimension": 256 },
//!   "cache_path": ".sted-cache",
//!   "seed": 2024
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sted_core::consistency::DEFAULT_ALPHA;
use sted_core::semantic::{EmbeddingProviderSpec, ProviderKind};
use sted_core::sted::{Mode, PaddingCost, StedConfig};
use sted_core::ted::TedConfig;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub structural: f64,
    pub content: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coercion {
    pub enabled: bool,
    #[serde(default = "default_penalty")]
    pub penalty: f64,
}

fn default_penalty() -> f64 {
    0.2
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    /// Replaces the preset weights of `mode`.
    pub weights: Option<Weights>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub insert_cost: Option<f64>,
    pub delete_cost: Option<f64>,
    pub padding: Option<PaddingCost>,
    pub coercion: Option<Coercion>,
    pub string_threshold_chars: Option<usize>,
    pub chunk_overlap_chars: Option<usize>,
    pub provider: Option<EmbeddingProviderSpec>,
    pub cache_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::input(path.display(), e))?;
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| Error::input(path.display(), e))?;
        config.validate().map_err(|e| Error::input(path.display(), e))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.sted_config(None)?;
        if let Some(a) = self.alpha {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::Input("alpha must be finite and positive".into()));
            }
        }
        if let Some(p) = &self.provider {
            p.validate().map_err(|e| Error::Input(e.to_string()))?;
        }
        Ok(())
    }

    /// Comparison settings; `mode` (from a flag) replaces both the file's
    /// mode and its custom weights.
    pub fn sted_config(&self, mode: Option<Mode>) -> Result<StedConfig> {
        let mut c = StedConfig::for_mode(mode.or(self.mode).unwrap_or_default());
        if let (None, Some(w)) = (mode, self.weights) {
            c.w_s = w.structural;
            c.w_c = w.content;
        }
        if let Some(l) = self.lambda {
            c.lambda = l;
        }
        if let Some(v) = self.insert_cost {
            c.insert_cost = v;
        }
        if let Some(v) = self.delete_cost {
            c.delete_cost = v;
        }
        if let Some(p) = self.padding {
            c.padding = p;
        }
        if let Some(co) = self.coercion {
            c.scalar_policy.coercion_enabled = co.enabled;
            c.scalar_policy.coercion_penalty = co.penalty;
        }
        if let Some(t) = self.string_threshold_chars {
            c.scalar_policy.string_threshold_chars = t;
        }
        if let Some(o) = self.chunk_overlap_chars {
            c.scalar_policy.chunk_overlap_chars = o;
        }
        c.validate().map_err(|e| Error::Input(e.to_string()))?;
        Ok(c)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(DEFAULT_ALPHA)
    }

    pub fn provider_spec(&self) -> EmbeddingProviderSpec {
        self.provider.clone().unwrap_or_else(EmbeddingProviderSpec::deterministic_local)
    }

    /// Whether embeddings go through a disk cache: always for remote
    /// providers, otherwise only when a path is configured.
    pub fn wants_disk_cache(&self) -> bool {
        self.cache_path.is_some() || self.provider_spec().kind == ProviderKind::RemoteHttp
    }
}

impl RunConfig {
    /// Baseline settings sharing the configured unit costs and lambda.
    pub fn ted_config(&self) -> TedConfig {
        let d = TedConfig::default();
        TedConfig {
            insert_cost: self.insert_cost.unwrap_or(d.insert_cost),
            delete_cost: self.delete_cost.unwrap_or(d.delete_cost),
            update_cost: d.update_cost,
            lambda: self.lambda.unwrap_or(d.lambda),
        }
    }
}
