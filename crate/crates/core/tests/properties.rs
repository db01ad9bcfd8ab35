//! Property tests over the public API.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use proptest::prelude::*;
use serde_json::Value;
use sted_core::assignment::{hungarian_solve, CostMatrix};
use sted_core::prelude::*;
use sted_core::semantic::scalar_pair_similarity;
use sted_core::variation::{enumerate_cases, RATIO_LEVELS};

fn arb_value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        (-1000i64..1000).prop_map(Value::from),
        (-1.0e6f64..1.0e6).prop_map(Value::from),
        "[a-zA-Z .\"\\\\é]{0,12}".prop_map(Value::String),
    ];
    leaf.prop_recursive(4, 48, 6, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..6).prop_map(Value::Array),
            prop::collection::btree_map("[a-z_.\\[]{1,6}", inner, 0..6)
                .prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

fn brute_depth_branching(v: &Value) -> (usize, usize) {
    match v {
        Value::Array(items) => items.iter().map(brute_depth_branching).fold((1, items.len()), |(d, b), (cd, cb)| {
            (d.max(cd + 1), b.max(cb))
        }),
        Value::Object(m) => m.values().map(brute_depth_branching).fold((1, m.len()), |(d, b), (cd, cb)| {
            (d.max(cd + 1), b.max(cb))
        }),
        _ => (1, 0),
    }
}

/// Process-local cache for checking that cached lookups change nothing.
#[derive(Default)]
struct MapCache(Mutex<BTreeMap<String, EmbeddingVector>>);

impl VectorCache for MapCache {
    fn get(&self, _: &EmbeddingProviderSpec, text: &str) -> Option<EmbeddingVector> {
        self.0.lock().unwrap().get(text).cloned()
    }

    fn put(&self, _: &EmbeddingProviderSpec, text: &str, vector: &EmbeddingVector) {
        self.0.lock().unwrap().insert(text.to_string(), vector.clone());
    }
}

fn bases() -> Vec<BaseDocSpec> {
    plan_corpus(12, 77, Default::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_preserves_tree(v in arb_value()) {
        let text = serde_json::to_string(&v).unwrap();
        let tree = parse_document(&text).unwrap();
        let again = parse_document(&tree.to_json()).unwrap();
        prop_assert_eq!(&again, &tree);
        // Both sides go through serde_json's own float parsing.
        let reparsed: Value = serde_json::from_str(&tree.to_json()).unwrap();
        prop_assert_eq!(reparsed, serde_json::from_str::<Value>(&text).unwrap());
    }

    #[test]
    fn paths_are_unique(v in arb_value()) {
        let tree = parse_document(&serde_json::to_string(&v).unwrap()).unwrap();
        let paths: BTreeSet<&str> = tree.root().iter().map(|n| n.path()).collect();
        prop_assert_eq!(paths.len(), tree.node_count());
    }

    #[test]
    fn stored_depth_and_branching_match_traversal(v in arb_value()) {
        let tree = parse_document(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!((tree.max_depth(), tree.max_branching()), brute_depth_branching(&v));
    }

    #[test]
    fn text_similarity_symmetric_and_bounded(a in "[a-z ]{1,400}", b in "[a-z ]{1,400}") {
        let p = HashingEmbedder::default();
        let ctx = EmbeddingContext::new(&p);
        let policy = ScalarPolicy::default();
        let ab = text_similarity(&a, &b, &ctx, &policy).unwrap();
        let ba = text_similarity(&b, &a, &ctx, &policy).unwrap();
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn scalar_similarity_identity_symmetry_range(a in arb_value(), b in arb_value()) {
        let (Some(x), Some(y)) = (
            parse_document(&a.to_string()).unwrap().root().scalar().cloned(),
            parse_document(&b.to_string()).unwrap().root().scalar().cloned(),
        ) else {
            return Ok(());
        };
        let p = HashingEmbedder::default();
        let ctx = EmbeddingContext::new(&p);
        let policy = ScalarPolicy::default();
        let empty = |s: &Scalar| matches!(s, Scalar::String(t) if t.is_empty());
        if empty(&x) || empty(&y) {
            return Ok(());
        }
        prop_assert_eq!(scalar_pair_similarity(&x, &x, &ctx, &policy).unwrap(), 1.0);
        let xy = scalar_pair_similarity(&x, &y, &ctx, &policy).unwrap();
        prop_assert_eq!(xy.to_bits(), scalar_pair_similarity(&y, &x, &ctx, &policy).unwrap().to_bits());
        prop_assert!((0.0..=1.0).contains(&xy));
    }

    #[test]
    fn normalization_is_idempotent(s in "[A-Za-z0-9_ .-]{1,24}") {
        let once = normalize_field_name(&s).unwrap();
        // Separator-only keys have no words left to normalize.
        if !once.is_empty() {
            prop_assert_eq!(normalize_field_name(&once).unwrap(), once);
        }
    }

    #[test]
    fn warm_cache_is_bit_exact(a in arb_value(), b in arb_value()) {
        let (a, b) = (parse_document(&a.to_string()).unwrap(), parse_document(&b.to_string()).unwrap());
        let p = HashingEmbedder::default();
        let cache = MapCache::default();
        let config = StedConfig::default();
        let cold = sted_score(&a, &b, &config, &EmbeddingContext::new(&p)).unwrap();
        let ctx = EmbeddingContext::new(&p).with_cache(&cache);
        let fill = sted_score(&a, &b, &config, &ctx).unwrap();
        let warm = sted_score(&a, &b, &config, &ctx).unwrap();
        prop_assert_eq!(cold.to_bits(), fill.to_bits());
        prop_assert_eq!(cold.to_bits(), warm.to_bits());
    }

    #[test]
    fn hungarian_matches_exhaustive_search(
        rows in (1usize..=6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0u8..=10, n), n))
    ) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let n = rows.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| best = best.min((0..n).map(|i| rows[i][p[i]]).sum()));
        prop_assert_eq!(hungarian_solve(&CostMatrix::from_rows(&rows).unwrap()).total_cost, best);
    }

    #[test]
    fn ted_identity_and_symmetry(a in arb_value(), b in arb_value()) {
        let (a, b) = (parse_document(&a.to_string()).unwrap(), parse_document(&b.to_string()).unwrap());
        let c = TedConfig::default();
        prop_assert_eq!(ted_similarity(&a, &a, &c), 1.0);
        prop_assert!((ted_similarity(&a, &b, &c) - ted_similarity(&b, &a, &c)).abs() <= 1e-9);
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rename_degradation_is_monotone(base_ix in 0usize..12, kind_seed in any::<u64>()) {
        let plan = bases();
        let base = gen_base_document(&plan[base_ix]).unwrap();
        let p = HashingEmbedder::default();
        let ctx = EmbeddingContext::new(&p);
        let tables = VariationTables::default();
        let config = StedConfig::default();
        let seed = enumerate_cases(&plan[base_ix..=base_ix], &[VariationKind::FieldRename], &[1.0])[0].seed ^ kind_seed;
        let scores: Vec<f64> = RATIO_LEVELS
            .iter()
            .map(|&ratio| {
                let spec = VariationSpec { kind: VariationKind::FieldRename, ratio, seed };
                let v = apply_variation(&base, &spec, &tables).unwrap();
                sted_score(&base, &v.tree, &config, &ctx).unwrap()
            })
            .collect();
        for w in scores.windows(2) {
            prop_assert!(w[0] >= w[1] - 0.02, "{:?}", scores);
        }
    }
}
