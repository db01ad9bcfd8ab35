use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::tree::{parse_document, to_json, NodeType};

fn doc(s: &str) -> DocumentTree {
    parse_document(s).unwrap()
}

fn table(pairs: &[(&str, &str)]) -> BTreeMapString {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

type BTreeMapString = alloc::collections::BTreeMap<String, String>;

fn keys(t: &DocumentTree) -> Vec<String> {
    t.root().iter().filter_map(|n| n.label()).map(String::from).collect()
}

fn leaves(t: &DocumentTree) -> Vec<(NodeType, String)> {
    let mut v: Vec<(NodeType, String)> = t
        .root()
        .iter()
        .filter(|n| n.is_leaf())
        .map(|n| (n.node_type(), to_json(n)))
        .collect();
    v.sort();
    v
}

/// Types and keys only, in document order.
fn shape(t: &DocumentTree) -> Vec<(Option<String>, NodeType, String)> {
    t.root().iter().map(|n| (n.label().map(String::from), n.node_type(), n.path().to_string())).collect()
}

fn sample_base(i: u64) -> DocumentTree {
    let specs = plan_corpus(12, 99, TypeMix::default());
    gen_base_document(&specs[i as usize % specs.len()]).unwrap()
}

#[test]
fn rounding_is_half_up() {
    assert_eq!(modified_count(0.5, 5).unwrap(), 3);
    assert_eq!(modified_count(0.5, 10).unwrap(), 5);
    assert_eq!(modified_count(0.3, 10).unwrap(), 3);
    assert_eq!(modified_count(0.1, 4).unwrap(), 0);
    assert_eq!(modified_count(0.0, 7).unwrap(), 0);
    assert_eq!(modified_count(1.0, 7).unwrap(), 7);
    assert!(modified_count(1.1, 7).is_err());
    assert!(modified_count(f64::NAN, 7).is_err());
}

#[test]
fn rename_examples() {
    let d = doc(r#"{"user_name": "John", "age": 30}"#);
    let t = table(&[("user_name", "userName")]);
    assert_eq!(apply_field_rename(&d, 0.0, &t, 1).unwrap(), d);
    let r = apply_field_rename(&d, 1.0, &t, 1).unwrap();
    assert_eq!(r.to_json(), r#"{"userName":"John","age":30}"#);
    assert_eq!(apply_field_rename(&d, 1.0, &table(&[("zzz", "y")]), 1), Err(VariationError::NoEligibleKeys));
}

#[test]
fn rename_counts_exactly() {
    let d = doc(r#"{"k0":0,"k1":1,"k2":2,"k3":3,"k4":4,"k5":5,"k6":6,"k7":7,"k8":8,"k9":9}"#);
    let pairs: Vec<(String, String)> = (0..10).map(|i| (alloc::format!("k{i}"), alloc::format!("K{i}"))).collect();
    let t: BTreeMapString = pairs.into_iter().collect();
    for seed in 0..20 {
        let r = apply_field_rename(&d, 0.5, &t, seed).unwrap();
        assert_eq!(keys(&r).iter().filter(|k| k.starts_with('K')).count(), 5);
    }
}

#[test]
fn rename_skips_colliding_targets() {
    let d = doc(r#"{"email": "a", "email_address": "b"}"#);
    let t = table(&[("email", "email_address")]);
    assert_eq!(apply_field_rename(&d, 1.0, &t, 0), Err(VariationError::NoEligibleKeys));
}

#[test]
fn expression_examples() {
    let d = doc(r#"{"goal": "purchase a car", "n": 3, "list": ["purchase a car", "x"]}"#);
    let t = table(&[("purchase a car", "buy an automobile")]);
    assert_eq!(apply_expression_variation(&d, 0.0, &t, 4).unwrap(), d);
    let r = apply_expression_variation(&d, 1.0, &t, 4).unwrap();
    assert_eq!(r.to_json(), r#"{"goal":"buy an automobile","n":3,"list":["buy an automobile","x"]}"#);
    assert_eq!(
        apply_expression_variation(&doc(r#"{"a": "q"}"#), 1.0, &t, 4),
        Err(VariationError::NoEligibleValues)
    );
}

#[test]
fn semantic_examples() {
    let d = doc(r#"{"a": "one", "b": "two", "c": ["three", "four"], "n": 5, "z": null, "t": true}"#);
    let pool = default_pool();
    assert_eq!(apply_semantic_variation(&d, 0.0, &pool, 2).unwrap(), d);
    let r = apply_semantic_variation(&d, 1.0, &pool, 2).unwrap();
    for (x, y) in d.root().iter().zip(r.root().iter()) {
        assert_eq!(x.node_type(), y.node_type());
        if x.is_leaf() && x.node_type() != NodeType::Null {
            assert_ne!(x.scalar(), y.scalar(), "{}", x.path());
        }
    }
    let empty = SubstitutionPool { strings: vec![], numbers: vec![1] };
    assert_eq!(apply_semantic_variation(&d, 0.5, &empty, 2), Err(VariationError::EmptyPool("string")));
}

#[test]
fn flatten_examples() {
    let f = flatten_structure(&doc(r#"{"user": {"name": "John", "age": 30}}"#));
    assert_eq!(f.tree.to_json(), r#"{"user_name":"John","user_age":30}"#);
    let flat = doc(r#"{"a": 1, "b": [1, {"c": 2}]}"#);
    assert_eq!(flatten_structure(&flat).tree, flat);
    assert_eq!(flatten_structure(&doc(r#"{"a":{"b":{"c":1}}}"#)).tree.to_json(), r#"{"a_b_c":1}"#);
}

#[test]
fn flatten_collisions_are_suffixed() {
    let f = flatten_structure(&doc(r#"{"a_b": 1, "a": {"b": 2}}"#));
    assert_eq!(f.tree.to_json(), r#"{"a_b":1,"a_b_2":2}"#);
    assert_eq!(f.warnings, [FlattenWarning { key: "a_b".into(), renamed_to: "a_b_2".into() }]);
}

#[test]
fn nest_examples() {
    let d = doc(r#"{"street": "Main", "city": "NYC"}"#);
    let g: Grouping = vec![("address".into(), vec!["street".into(), "city".into()])];
    assert_eq!(nest_structure(&d, &g).unwrap().to_json(), r#"{"address":{"street":"Main","city":"NYC"}}"#);
    assert_eq!(nest_structure(&d, &[]).unwrap(), d);
    let partial: Grouping = vec![("address".into(), vec!["city".into()])];
    assert_eq!(nest_structure(&d, &partial).unwrap().to_json(), r#"{"street":"Main","address":{"city":"NYC"}}"#);
}

#[test]
fn nest_errors() {
    let d = doc(r#"{"a": 1, "b": 2}"#);
    let g = |v: &[(&str, &[&str])]| -> Grouping {
        v.iter().map(|(n, ks)| (n.to_string(), ks.iter().map(|k| k.to_string()).collect())).collect()
    };
    assert_eq!(nest_structure(&d, &g(&[("x", &["c"])])), Err(VariationError::UnknownKey("c".into())));
    assert_eq!(
        nest_structure(&d, &g(&[("x", &["a"]), ("y", &["a"])])),
        Err(VariationError::OverlappingGroups("a".into()))
    );
    assert_eq!(nest_structure(&d, &g(&[("b", &["a"])])), Err(VariationError::GroupNameCollision("b".into())));
    assert!(nest_structure(&d, &g(&[("a", &["a", "b"])])).is_ok());
    assert_eq!(nest_structure(&doc("[1]"), &[]), Err(VariationError::RootNotObject));
}

#[test]
fn default_grouping_covers_root() {
    let d = sample_base(3);
    let g = default_grouping(&d, 5);
    let mut grouped: Vec<String> = g.iter().flat_map(|(_, k)| k.clone()).collect();
    grouped.sort();
    let mut root: Vec<String> = d.root().children().iter().filter_map(|c| c.label()).map(String::from).collect();
    root.sort();
    assert_eq!(grouped, root);
    nest_structure(&d, &g).unwrap();
}

#[test]
fn corpus_plan_matches_histograms() {
    let plan = plan_corpus(75, 11, TypeMix::default());
    let mut depths = [0usize; 6];
    for s in &plan {
        depths[s.target_depth - 2] += 1;
    }
    assert_eq!(depths, [8, 7, 44, 13, 2, 1]);
    let mean = plan.iter().map(|s| s.target_fields as f64).sum::<f64>() / 75.0;
    assert!((30.0..=55.0).contains(&mean), "{mean}");
    assert_eq!(plan, plan_corpus(75, 11, TypeMix::default()));
    for s in &plan {
        gen_base_document(s).unwrap();
    }
}

#[test]
fn case_enumeration() {
    let plan = plan_corpus(75, 1, TypeMix::default());
    assert_eq!(enumerate_cases(&plan, &VariationKind::GRADUAL, &RATIO_LEVELS).len(), 75 * 10 * 3);
    assert_eq!(enumerate_cases(&plan, &[VariationKind::Flatten], &RATIO_LEVELS).len(), 75);
    let cases = enumerate_cases(&plan[..1], &[VariationKind::FieldRename, VariationKind::Nest], &RATIO_LEVELS);
    assert_eq!(cases[0].case_id, "b000-field-rename-r010");
    assert_eq!(cases[10].case_id, "b000-nest");
    assert!(cases[..10].iter().all(|c| c.seed == cases[0].seed));
}

#[test]
fn every_base_has_rename_and_expression_sites() {
    let tables = VariationTables::default();
    for spec in plan_corpus(75, 2024, TypeMix::default()) {
        let d = gen_base_document(&spec).unwrap();
        for kind in VariationKind::ALL {
            apply_variation(&d, &VariationSpec { kind, ratio: 1.0, seed: 3 }, &tables).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deterministic_and_nested(i in 0u64..12, seed in any::<u64>(), kind_ix in 0usize..3) {
        let d = sample_base(i);
        let tables = VariationTables::default();
        let kind = VariationKind::GRADUAL[kind_ix];
        let mut previous: Option<DocumentTree> = None;
        for ratio in RATIO_LEVELS {
            let spec = VariationSpec { kind, ratio, seed };
            let Ok(a) = apply_variation(&d, &spec, &tables) else { return Ok(()); };
            let b = apply_variation(&d, &spec, &tables).unwrap();
            prop_assert_eq!(a.tree.to_json(), b.tree.to_json());
            // Everything changed at the previous ratio stays changed.
            if let Some(p) = &previous {
                for ((x, y), z) in d.root().iter().zip(p.root().iter()).zip(a.tree.root().iter()) {
                    if x.label() != y.label() || x.scalar() != y.scalar() {
                        prop_assert_eq!(y.label(), z.label());
                        prop_assert_eq!(y.scalar(), z.scalar());
                    }
                }
            }
            previous = Some(a.tree);
        }
    }

    #[test]
    fn ratio_exactness(i in 0u64..12, seed in any::<u64>(), level in 0usize..10) {
        let d = sample_base(i);
        let tables = VariationTables::default();
        let ratio = RATIO_LEVELS[level];
        let full = apply_field_rename(&d, 1.0, &tables.synonyms, seed).unwrap();
        let part = apply_field_rename(&d, ratio, &tables.synonyms, seed).unwrap();
        let changed = |t: &DocumentTree| d.root().iter().zip(t.root().iter()).filter(|(x, y)| x.label() != y.label()).count();
        let eligible = changed(&full);
        prop_assert_eq!(changed(&part), modified_count(ratio, eligible).unwrap());

        let full = apply_semantic_variation(&d, 1.0, &tables.pool, seed).unwrap();
        let part = apply_semantic_variation(&d, ratio, &tables.pool, seed).unwrap();
        let changed = |t: &DocumentTree| d.root().iter().zip(t.root().iter()).filter(|(x, y)| x.scalar() != y.scalar()).count();
        prop_assert_eq!(changed(&part), modified_count(ratio, changed(&full)).unwrap());
    }

    #[test]
    fn taxonomy_separation(i in 0u64..12, seed in any::<u64>(), ratio in 0.0f64..=1.0) {
        let d = sample_base(i);
        let tables = VariationTables::default();
        let renamed = apply_field_rename(&d, ratio, &tables.synonyms, seed).unwrap();
        let values = |t: &DocumentTree| t.root().iter().map(|n| (n.node_type(), n.scalar().cloned())).collect::<Vec<_>>();
        prop_assert_eq!(values(&renamed), values(&d));
        for t in [
            apply_expression_variation(&d, ratio, &tables.paraphrases, seed).unwrap(),
            apply_semantic_variation(&d, ratio, &tables.pool, seed).unwrap(),
        ] {
            prop_assert_eq!(shape(&t), shape(&d));
        }
        let flat = flatten_structure(&d).tree;
        let nested = nest_structure(&d, &default_grouping(&d, seed)).unwrap();
        prop_assert_eq!(leaves(&flat), leaves(&d));
        prop_assert_eq!(leaves(&nested), leaves(&d));
    }
}
