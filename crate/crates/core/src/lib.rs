//! Semantic tree edit distance (STED) for structured documents.
//!
//! The crate is `no_std` and only needs an allocator. It covers the whole
//! computational path: parsing JSON into a typed tree, leaf-level semantic
//! similarity behind a pluggable embedding provider, optimal child matching
//! with the Hungarian algorithm, per-level normalized similarity, an ordered
//! exact-label baseline, consistency aggregation across repeated generations,
//! and a seeded generator for variation corpora.
//!
//! Filesystem caching, HTTP providers, corpus IO and the command-line tool
//! live in the `sted` crate.
//!
//! ```
//! use sted_core::prelude::*;
//!
//! let a = parse_document(r#"{"user_name": "John", "age": 30}"#).unwrap();
//! let b = parse_document(r#"{"age": 30, "userName": "John"}"#).unwrap();
//! let provider = HashingEmbedder::default();
//! let ctx = EmbeddingContext::new(&provider);
//! let result = sted_similarity(&a, &b, &StedConfig::default(), &ctx).unwrap();
//! assert_eq!(result.score, 1.0);
//! ```

#![no_std]

extern crate alloc;

pub mod assignment;
pub mod consistency;
pub mod semantic;
pub mod sted;
pub mod ted;
pub mod tree;
pub mod variation;


/// The commonly used types and functions.
pub mod prelude {
    pub use crate::assignment::{hungarian_solve, Assignment, CostMatrix};
    pub use crate::consistency::{
        consistency_score, evaluate_consistency, mean_consistency, pairwise_similarities, sigma_max, summary_stats,
        ConsistencyReport, SimilaritySet, Summary, DEFAULT_ALPHA,
    };
    pub use crate::semantic::{
        normalize_field_name, scalar_similarity, text_similarity, EmbeddingContext, EmbeddingProvider,
        EmbeddingProviderSpec, EmbeddingVector, HashingEmbedder, ProviderKind, ScalarPolicy, VectorCache,
    };
    pub use crate::sted::{
        compare_report, node_update_cost, optimal_children_matching, sted_score, sted_similarity, Difference,
        DifferenceKind, MatchResult, Mode, PreparedSet, SimilarityResult, StedConfig,
    };
    pub use crate::ted::{ted_report, ted_similarity, TedConfig};
    pub use crate::tree::{parse_document, tree_stats, DocumentTree, NodeKind, NodeType, Number, Scalar, TreeNode, TreeStats};
    pub use crate::variation::{
        apply_variation, gen_base_document, plan_corpus, BaseDocSpec, VariationKind, VariationSpec, VariationTables,
    };
}
