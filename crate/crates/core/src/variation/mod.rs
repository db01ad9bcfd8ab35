//! Seeded synthesis of base documents and labeled variants.
//!
//! Gradual variants (field rename, expression, semantic) modify
//! `round(ratio * eligible)` sites, rounding half up. Sites are taken as a
//! prefix of one seeded permutation, so for a fixed seed the sites changed
//! at a lower ratio are a subset of those changed at a higher one.

mod base;
mod corpus;
mod structure;
mod tables;

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{DocumentTree, NodeKind, Number, Scalar, TreeNode};

pub use base::{gen_base_document, BaseDocSpec, TypeMix, MAX_DEPTH, MAX_FIELDS, MIN_DEPTH, MIN_FIELDS};
pub use corpus::{derive_seed, enumerate_cases, plan_corpus, CaseSpec};
pub use structure::{default_grouping, flatten_structure, nest_structure, FlattenWarning, Flattened, Grouping};
pub use tables::{
    default_paraphrases, default_pool, default_synonyms, ParaphraseTable, SubstitutionPool, SynonymTable,
};

/// The ten modification ratios of a gradual sweep.
pub const RATIO_LEVELS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

#[derive(Debug, Error, PartialEq)]
pub enum VariationError {
    #[error("invalid specification: {0}")]
    InvalidSpec(&'static str),
    #[error("depth {depth} cannot be reached with {fields} fields")]
    InfeasibleSpec { depth: usize, fields: usize },
    #[error("ratio must be within [0, 1], got {0}")]
    InvalidRatio(f64),
    #[error("no key in the document has an entry in the synonym table")]
    NoEligibleKeys,
    #[error("no string value in the document has an entry in the paraphrase table")]
    NoEligibleValues,
    #[error("substitution pool has no replacement for a {0} value")]
    EmptyPool(&'static str),
    #[error("grouped key {0:?} is not a root member")]
    UnknownKey(String),
    #[error("key {0:?} is listed in more than one group")]
    OverlappingGroups(String),
    #[error("group name {0:?} collides with a root member")]
    GroupNameCollision(String),
    #[error("document root is not an object")]
    RootNotObject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariationKind {
    FieldRename,
    Expression,
    Semantic,
    Flatten,
    Nest,
}

impl VariationKind {
    pub const ALL: [VariationKind; 5] = [
        VariationKind::FieldRename,
        VariationKind::Expression,
        VariationKind::Semantic,
        VariationKind::Flatten,
        VariationKind::Nest,
    ];
    pub const GRADUAL: [VariationKind; 3] =
        [VariationKind::FieldRename, VariationKind::Expression, VariationKind::Semantic];
    pub const STRUCTURAL: [VariationKind; 2] = [VariationKind::Flatten, VariationKind::Nest];

    pub fn as_str(self) -> &'static str {
        match self {
            VariationKind::FieldRename => "field-rename",
            VariationKind::Expression => "expression",
            VariationKind::Semantic => "semantic",
            VariationKind::Flatten => "flatten",
            VariationKind::Nest => "nest",
        }
    }

    pub fn is_gradual(self) -> bool {
        VariationKind::GRADUAL.contains(&self)
    }
}

impl core::str::FromStr for VariationKind {
    type Err = VariationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VariationKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(VariationError::InvalidSpec("unknown variation kind"))
    }
}

impl core::fmt::Display for VariationKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationSpec {
    pub kind: VariationKind,
    /// Ignored by structural kinds.
    pub ratio: f64,
    pub seed: u64,
}

/// Tables shared by every variant of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationTables {
    pub synonyms: SynonymTable,
    pub paraphrases: ParaphraseTable,
    pub pool: SubstitutionPool,
}

impl Default for VariationTables {
    fn default() -> Self {
        VariationTables { synonyms: default_synonyms(), paraphrases: default_paraphrases(), pool: default_pool() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub tree: DocumentTree,
    pub warnings: Vec<FlattenWarning>,
}

pub fn apply_variation(
    doc: &DocumentTree,
    spec: &VariationSpec,
    tables: &VariationTables,
) -> Result<Variant, VariationError> {
    let tree = match spec.kind {
        VariationKind::FieldRename => apply_field_rename(doc, spec.ratio, &tables.synonyms, spec.seed)?,
        VariationKind::Expression => apply_expression_variation(doc, spec.ratio, &tables.paraphrases, spec.seed)?,
        VariationKind::Semantic => apply_semantic_variation(doc, spec.ratio, &tables.pool, spec.seed)?,
        VariationKind::Flatten => {
            let f = flatten_structure(doc);
            return Ok(Variant { tree: f.tree, warnings: f.warnings });
        }
        VariationKind::Nest => nest_structure(doc, &default_grouping(doc, spec.seed))?,
    };
    Ok(Variant { tree, warnings: Vec::new() })
}

/// `round(ratio * eligible)`, halves rounded up.
pub fn modified_count(ratio: f64, eligible: usize) -> Result<usize, VariationError> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(VariationError::InvalidRatio(ratio));
    }
    // The small epsilon keeps products such as 0.5 * 5 on the upper side.
    Ok((libm::floor(ratio * eligible as f64 + 0.5 + 1e-9) as usize).min(eligible))
}

/// Selection mask over `eligible` sites: the first `count` entries of a
/// permutation seeded by `seed` alone.
fn select(eligible: usize, ratio: f64, seed: u64) -> Result<Vec<bool>, VariationError> {
    let count = modified_count(ratio, eligible)?;
    let mut order: Vec<usize> = (0..eligible).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut mask = alloc::vec![false; eligible];
    for &i in &order[..count] {
        mask[i] = true;
    }
    Ok(mask)
}

/// Calls `f` on the member list of every object, parents before children.
fn for_each_object(node: &mut TreeNode, f: &mut impl FnMut(&mut Vec<TreeNode>)) {
    if let NodeKind::Object(children) = node.kind_mut() {
        f(children);
    }
    if let NodeKind::Object(children) | NodeKind::Array(children) = node.kind_mut() {
        for child in children {
            for_each_object(child, f);
        }
    }
}

/// Calls `f` on every leaf in pre-order.
fn for_each_leaf(node: &mut TreeNode, f: &mut impl FnMut(&mut Scalar)) {
    match node.kind_mut() {
        NodeKind::Leaf(s) => f(s),
        NodeKind::Object(children) | NodeKind::Array(children) => {
            for child in children {
                for_each_leaf(child, f);
            }
        }
    }
}

/// Rename targets for one member list; `None` where the member is not
/// eligible (no entry, or the target would collide with a sibling).
fn rename_targets<'t>(members: &[TreeNode], table: &'t SynonymTable) -> Vec<Option<&'t String>> {
    let mut targets: Vec<Option<&String>> = Vec::with_capacity(members.len());
    for m in members {
        let key = m.label().unwrap_or("");
        let target = table.get(key).filter(|t| {
            t.as_str() != key
                && !members.iter().any(|o| o.label() == Some(t.as_str()))
                && !targets.contains(&Some(*t))
        });
        targets.push(target);
    }
    targets
}

pub fn apply_field_rename(
    doc: &DocumentTree,
    ratio: f64,
    table: &SynonymTable,
    seed: u64,
) -> Result<DocumentTree, VariationError> {
    let mut root = doc.root().clone();
    let mut eligible = 0;
    for_each_object(&mut root, &mut |members| {
        eligible += rename_targets(members, table).iter().flatten().count();
    });
    if eligible == 0 {
        return Err(VariationError::NoEligibleKeys);
    }
    let mask = select(eligible, ratio, seed)?;
    let mut site = 0;
    for_each_object(&mut root, &mut |members| {
        let targets: Vec<Option<String>> = rename_targets(members, table).into_iter().map(|t| t.cloned()).collect();
        for (m, t) in members.iter_mut().zip(targets) {
            if let Some(t) = t {
                if mask[site] {
                    m.set_label(t);
                }
                site += 1;
            }
        }
    });
    Ok(DocumentTree::new(root))
}

pub fn apply_expression_variation(
    doc: &DocumentTree,
    ratio: f64,
    table: &ParaphraseTable,
    seed: u64,
) -> Result<DocumentTree, VariationError> {
    let mut root = doc.root().clone();
    let mut eligible = 0;
    for_each_leaf(&mut root, &mut |s| {
        if matches!(s, Scalar::String(v) if table.contains_key(v)) {
            eligible += 1;
        }
    });
    if eligible == 0 {
        return Err(VariationError::NoEligibleValues);
    }
    let mask = select(eligible, ratio, seed)?;
    let mut site = 0;
    for_each_leaf(&mut root, &mut |s| {
        if let Scalar::String(v) = s {
            if let Some(p) = table.get(v.as_str()) {
                if mask[site] {
                    *v = p.clone();
                }
                site += 1;
            }
        }
    });
    Ok(DocumentTree::new(root))
}

/// Replaces string, number and boolean leaves with a different value of
/// the same type. Replacement values are drawn for every eligible site
/// before selection, so they do not depend on `ratio`.
pub fn apply_semantic_variation(
    doc: &DocumentTree,
    ratio: f64,
    pool: &SubstitutionPool,
    seed: u64,
) -> Result<DocumentTree, VariationError> {
    let mut root = doc.root().clone();
    let mut draws = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let mut replacements: Vec<Scalar> = Vec::new();
    let mut failure = None;
    for_each_leaf(&mut root, &mut |s| {
        if failure.is_some() {
            return;
        }
        match replacement(s, pool, &mut draws) {
            Ok(Some(r)) => replacements.push(r),
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mask = select(replacements.len(), ratio, seed)?;
    let mut site = 0;
    for_each_leaf(&mut root, &mut |s| {
        if matches!(s, Scalar::Null) {
            return;
        }
        if mask[site] {
            *s = replacements[site].clone();
        }
        site += 1;
    });
    Ok(DocumentTree::new(root))
}

fn replacement(s: &Scalar, pool: &SubstitutionPool, rng: &mut ChaCha8Rng) -> Result<Option<Scalar>, VariationError> {
    Ok(match s {
        Scalar::Null => None,
        Scalar::Bool(b) => Some(Scalar::Bool(!b)),
        Scalar::String(v) => {
            let options: Vec<&String> = pool.strings.iter().filter(|p| *p != v).collect();
            let pick = options.choose(rng).ok_or(VariationError::EmptyPool("string"))?;
            Some(Scalar::String((*pick).clone()))
        }
        Scalar::Number(n) => {
            let options: Vec<i64> = pool.numbers.iter().copied().filter(|p| (*p as f64) != n.value()).collect();
            let pick = options.choose(rng).ok_or(VariationError::EmptyPool("number"))?;
            Some(Scalar::Number(Number::from_i64(*pick)))
        }
    })
}

#[cfg(test)]
mod tests;
