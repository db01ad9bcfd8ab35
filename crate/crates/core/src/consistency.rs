//! Aggregation of pairwise similarities over repeated generations.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantic::EmbeddingContext;
use crate::sted::{Mode, PreparedSet, StedConfig, StedError};
use crate::tree::DocumentTree;

pub const DEFAULT_ALPHA: f64 = 20.0;

#[derive(Debug, Error)]
pub enum ConsistencyError {
    #[error("no similarity values")]
    EmptySet,
    #[error("at least 2 values are needed, got {0}")]
    TooFew(usize),
    #[error("at least one output is needed")]
    NoOutputs,
    #[error("alpha must be finite and positive")]
    InvalidAlpha,
    #[error(transparent)]
    Sted(#[from] StedError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySet {
    pub values: Vec<f64>,
    pub n_outputs: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub mean_consistency: f64,
    pub sigma: f64,
    pub sigma_max: f64,
    pub sigma_hat: f64,
    pub consistency_score: f64,
    pub alpha: f64,
    pub mode: String,
    pub n_outputs: usize,
    /// `None` when there are no pairwise values.
    pub summary: Option<Summary>,
}

/// All `n(n-1)/2` scores `(i, j)`, `i < j`, in lexicographic order.
pub fn pairwise_similarities(
    outputs: &[DocumentTree],
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
) -> Result<SimilaritySet, ConsistencyError> {
    let prepared = PreparedSet::new(outputs, config, ctx)?;
    Ok(similarity_set(&prepared, |f| pairs(outputs.len()).map(|(i, j)| f(i, j)).collect()))
}

/// Builds the set from an already prepared batch; `run` receives the pair
/// scorer so callers can fan pairs out however they like, as long as the
/// returned values follow [`pairs`] order.
pub fn similarity_set<F>(prepared: &PreparedSet<'_>, run: F) -> SimilaritySet
where
    F: FnOnce(&(dyn Fn(usize, usize) -> f64 + Sync + '_)) -> Vec<f64>,
{
    let values = run(&|i, j| prepared.score(i, j));
    SimilaritySet { values, n_outputs: prepared.len(), mode: prepared.config().mode }
}

/// Unordered index pairs `(i, j)` with `i < j < n`, lexicographic.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub fn mean_consistency(set: &SimilaritySet) -> Result<f64, ConsistencyError> {
    if set.values.is_empty() {
        return Err(ConsistencyError::EmptySet);
    }
    Ok(mean(&set.values).clamp(0.0, 1.0))
}

/// Population std of `floor(n/2)` zeros and `ceil(n/2)` ones.
pub fn sigma_max(n: usize) -> Result<f64, ConsistencyError> {
    if n < 2 {
        return Err(ConsistencyError::TooFew(n));
    }
    let ones = n.div_ceil(2) as f64;
    let p = ones / n as f64;
    Ok(libm::sqrt(p * (1.0 - p)))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn population_std(values: &[f64]) -> f64 {
    if values.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64;
    libm::sqrt(var)
}

pub fn summary_stats(values: &[f64]) -> Result<Summary, ConsistencyError> {
    if values.is_empty() {
        return Err(ConsistencyError::EmptySet);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    Ok(Summary {
        mean: mean(values),
        std: population_std(values),
        min: sorted[0],
        max: sorted[n - 1],
        median,
    })
}

/// `(1 / (1 + 2 σ̂))^alpha`; with fewer than two values the score is 1.
pub fn consistency_score(set: &SimilaritySet, alpha: f64) -> Result<ConsistencyReport, ConsistencyError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ConsistencyError::InvalidAlpha);
    }
    let values = &set.values;
    let (sigma, sigma_max, sigma_hat, score) = if values.len() < 2 {
        (0.0, 0.0, 0.0, 1.0)
    } else {
        let sigma = population_std(values);
        let sigma_max = sigma_max(values.len())?;
        let sigma_hat = if sigma_max > 0.0 { (sigma / sigma_max).clamp(0.0, 1.0) } else { 0.0 };
        let score = if sigma_hat == 0.0 { 1.0 } else { libm::pow(1.0 / (1.0 + 2.0 * sigma_hat), alpha) };
        (sigma, sigma_max, sigma_hat, score)
    };
    Ok(ConsistencyReport {
        mean_consistency: if values.is_empty() { 1.0 } else { mean_consistency(set)? },
        sigma,
        sigma_max,
        sigma_hat,
        consistency_score: score,
        alpha,
        mode: String::from(set.mode.as_str()),
        n_outputs: set.n_outputs,
        summary: summary_stats(values).ok(),
    })
}

/// Scores every pair of `outputs` under the preset weights of `mode` (other
/// settings from `config` are kept) and aggregates the result.
pub fn evaluate_consistency(
    outputs: &[DocumentTree],
    mode: Mode,
    config: &StedConfig,
    ctx: &EmbeddingContext<'_>,
    alpha: f64,
) -> Result<ConsistencyReport, ConsistencyError> {
    if outputs.is_empty() {
        return Err(ConsistencyError::NoOutputs);
    }
    let set = pairwise_similarities(outputs, &config.with_mode(mode), ctx)?;
    consistency_score(&set, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantic::HashingEmbedder;
    use crate::tree::parse_document;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(values: &[f64]) -> SimilaritySet {
        SimilaritySet { values: values.to_vec(), n_outputs: 0, mode: Mode::Hybrid }
    }

    fn score(values: &[f64]) -> f64 {
        consistency_score(&set(values), DEFAULT_ALPHA).unwrap().consistency_score
    }

    fn docs(texts: &[&str]) -> Vec<DocumentTree> {
        texts.iter().map(|t| parse_document(t).unwrap()).collect()
    }

    #[test]
    fn pair_order_and_count() {
        assert_eq!(pairs(3).collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 2)]);
        assert_eq!(pairs(10).count(), 45);
        assert_eq!(pairs(1).count(), 0);
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_consistency(&set(&[0.8])).unwrap(), 0.8);
        assert_eq!(mean_consistency(&set(&[1.0, 0.5, 0.75])).unwrap(), 0.75);
        assert_eq!(mean_consistency(&set(&[1.0; 7])).unwrap(), 1.0);
        assert!(matches!(mean_consistency(&set(&[])), Err(ConsistencyError::EmptySet)));
    }

    #[test]
    fn sigma_max_examples() {
        assert_eq!(sigma_max(2).unwrap(), 0.5);
        assert!((sigma_max(3).unwrap() - libm::sqrt(2.0) / 3.0).abs() < 1e-15);
        assert_eq!(sigma_max(4).unwrap(), 0.5);
        assert!(matches!(sigma_max(1), Err(ConsistencyError::TooFew(1))));
        // Brute force: population std of the half-and-half list.
        for n in 2..40usize {
            let list: Vec<f64> = (0..n).map(|i| if i < n / 2 { 0.0 } else { 1.0 }).collect();
            assert!((sigma_max(n).unwrap() - population_std(&list)).abs() < 1e-15);
        }
    }

    #[test]
    fn score_examples() {
        assert_eq!(score(&[0.9, 0.9, 0.9]), 1.0);
        assert_eq!(score(&[]), 1.0);
        assert_eq!(score(&[0.3]), 1.0);
        let r = consistency_score(&set(&[0.0, 1.0]), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.sigma_hat, 1.0);
        let direct = 1.0 / 3f64.powi(20);
        assert!((r.consistency_score - direct).abs() < 1e-15);
        assert!((r.consistency_score - 2.867e-10).abs() < 1e-13);
    }

    #[test]
    fn empty_report_fields() {
        let r = consistency_score(&set(&[]), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.mean_consistency, 1.0);
        assert!(r.summary.is_none());
        assert!(consistency_score(&set(&[0.5]), 0.0).is_err());
    }

    #[test]
    fn summary_examples() {
        let s = summary_stats(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.std, s.min, s.max, s.median), (1.0, 0.0, 1.0, 1.0, 1.0));
        let s = summary_stats(&[0.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.std, s.median), (0.5, 0.5, 0.5));
        assert_eq!(summary_stats(&[0.9, 0.2, 0.4]).unwrap().median, 0.4);
        assert!(summary_stats(&[]).is_err());
    }

    #[test]
    fn strictly_decreasing_on_grid() {
        let f = |h: f64| libm::pow(1.0 / (1.0 + 2.0 * h), DEFAULT_ALPHA);
        let grid: Vec<f64> = (0..100).map(|k| f(k as f64 / 99.0)).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn evaluate_modes() {
        let provider = HashingEmbedder::default();
        let ctx = EmbeddingContext::new(&provider);
        let cfg = StedConfig::default();
        let same = docs(&[r#"{"a": 1}"#, r#"{"a": 1}"#, r#"{"a": 1}"#]);
        for mode in Mode::ALL {
            let r = evaluate_consistency(&same, mode, &cfg, &ctx, DEFAULT_ALPHA).unwrap();
            assert_eq!((r.consistency_score, r.mean_consistency), (1.0, 1.0));
        }

        let values = docs(&[
            r#"{"city": "Paris", "n": 1}"#,
            r#"{"city": "Paris", "n": 1}"#,
            r#"{"city": "quantum widget", "n": 1}"#,
        ]);
        let st = evaluate_consistency(&values, Mode::Structural, &cfg, &ctx, DEFAULT_ALPHA).unwrap();
        let se = evaluate_consistency(&values, Mode::Semantic, &cfg, &ctx, DEFAULT_ALPHA).unwrap();
        assert_eq!(st.consistency_score, 1.0);
        assert!(se.consistency_score < 1.0);

        let reshaped = docs(&[
            r#"{"name": "Ann", "city": "Oslo"}"#,
            r#"{"name": "Ann", "city": "Oslo"}"#,
            r#"{"person": {"name": "Ann", "city": "Oslo"}}"#,
        ]);
        let st = evaluate_consistency(&reshaped, Mode::Structural, &cfg, &ctx, DEFAULT_ALPHA).unwrap();
        assert!(st.mean_consistency < 1.0);

        let five = docs(&[r#"[1, "x"]"#; 5]);
        let set = pairwise_similarities(&five, &cfg, &ctx).unwrap();
        assert_eq!(set.values, vec![1.0; 10]);
        assert!(matches!(
            evaluate_consistency(&[], Mode::Hybrid, &cfg, &ctx, DEFAULT_ALPHA),
            Err(ConsistencyError::NoOutputs)
        ));
    }

    proptest! {
        #[test]
        fn score_in_range(values in prop::collection::vec(0.0f64..=1.0, 0..30)) {
            let r = consistency_score(&set(&values), DEFAULT_ALPHA).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.consistency_score));
            prop_assert!((0.0..=1.0).contains(&r.mean_consistency));
            prop_assert!((0.0..=1.0).contains(&r.sigma_hat));
        }

        #[test]
        fn duplicating_every_value_keeps_score(values in prop::collection::vec(0.0f64..=1.0, 1..30)) {
            let mut doubled = values.clone();
            doubled.extend_from_slice(&values);
            let a = consistency_score(&set(&values), DEFAULT_ALPHA).unwrap();
            let b = consistency_score(&set(&doubled), DEFAULT_ALPHA).unwrap();
            prop_assert!((a.sigma - b.sigma).abs() < 1e-12);
            // sigma_max depends on parity for odd counts, so the score is
            // only compared when the original count is even.
            if values.len() % 2 == 0 {
                prop_assert!((a.consistency_score - b.consistency_score).abs() < 1e-9);
            }
        }

        #[test]
        fn constant_lists_score_one(c in 0.0f64..=1.0, n in 2usize..40) {
            prop_assert_eq!(score(&vec![c; n]), 1.0);
        }
    }
}
