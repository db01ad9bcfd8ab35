use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tables::GROUP_NAMES;
use super::VariationError;
use crate::tree::{DocumentTree, NodeKind, TreeNode};

/// Largest group built by [`default_grouping`].
const GROUP_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlattenWarning {
    /// Joined key that was already taken.
    pub key: String,
    pub renamed_to: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flattened {
    pub tree: DocumentTree,
    pub warnings: Vec<FlattenWarning>,
}

/// Ordered `(group name, member keys)` pairs.
pub type Grouping = Vec<(String, Vec<String>)>;

/// Hoists every nested object member to the root under its
/// underscore-joined key path. Arrays stay intact under their joined key.
/// A root that is not an object, or holds no nested object, is returned
/// unchanged.
pub fn flatten_structure(doc: &DocumentTree) -> Flattened {
    let NodeKind::Object(children) = doc.root().kind() else {
        return Flattened { tree: doc.clone(), warnings: Vec::new() };
    };
    let mut out: Vec<(String, TreeNode)> = Vec::new();
    let mut taken = BTreeSet::new();
    let mut warnings = Vec::new();
    for child in children {
        hoist(String::new(), child, &mut out, &mut taken, &mut warnings);
    }
    Flattened { tree: DocumentTree::new(TreeNode::object(out)), warnings }
}

fn hoist(
    prefix: String,
    node: &TreeNode,
    out: &mut Vec<(String, TreeNode)>,
    taken: &mut BTreeSet<String>,
    warnings: &mut Vec<FlattenWarning>,
) {
    let label = node.label().unwrap_or("");
    let key = if prefix.is_empty() { label.to_string() } else { format!("{prefix}_{label}") };
    match node.kind() {
        NodeKind::Object(children) if !children.is_empty() => {
            for child in children {
                hoist(key.clone(), child, out, taken, warnings);
            }
        }
        _ => {
            let mut unique = key.clone();
            let mut n = 2;
            while taken.contains(&unique) {
                unique = format!("{key}_{n}");
                n += 1;
            }
            if unique != key {
                warnings.push(FlattenWarning { key, renamed_to: unique.clone() });
            }
            taken.insert(unique.clone());
            out.push((unique, node.clone()));
        }
    }
}

/// Moves the listed root keys under new object members named after their
/// group. Each group takes the position of its first listed key that is a
/// root member; ungrouped keys keep their place.
pub fn nest_structure(doc: &DocumentTree, grouping: &[(String, Vec<String>)]) -> Result<DocumentTree, VariationError> {
    let NodeKind::Object(children) = doc.root().kind() else {
        return Err(VariationError::RootNotObject);
    };
    let mut owner: alloc::collections::BTreeMap<&str, usize> = alloc::collections::BTreeMap::new();
    for (g, (_, keys)) in grouping.iter().enumerate() {
        for key in keys {
            if owner.insert(key.as_str(), g).is_some() {
                return Err(VariationError::OverlappingGroups(key.clone()));
            }
            if doc.root().get(key).is_none() {
                return Err(VariationError::UnknownKey(key.clone()));
            }
        }
    }
    let mut names = BTreeSet::new();
    for (name, _) in grouping {
        let stays = children.iter().any(|c| c.label() == Some(name.as_str()) && !owner.contains_key(name.as_str()));
        if stays || !names.insert(name.as_str()) {
            return Err(VariationError::GroupNameCollision(name.clone()));
        }
    }

    let mut members: Vec<Vec<(String, TreeNode)>> = alloc::vec![Vec::new(); grouping.len()];
    // Slots in output order: an ungrouped child, or the first appearance of a group.
    enum Slot<'a> {
        Keep(&'a TreeNode),
        Group(usize),
    }
    let mut slots = Vec::new();
    for child in children {
        let label = child.label().unwrap_or("");
        match owner.get(label) {
            Some(&g) => {
                if members[g].is_empty() {
                    slots.push(Slot::Group(g));
                }
                members[g].push((label.to_string(), child.clone()));
            }
            None => slots.push(Slot::Keep(child)),
        }
    }
    // Groups with no listed keys are appended as empty objects.
    for (g, m) in members.iter().enumerate() {
        if m.is_empty() {
            slots.push(Slot::Group(g));
        }
    }
    let mut members: Vec<Option<Vec<(String, TreeNode)>>> = members.into_iter().map(Some).collect();
    let entries: Vec<(String, TreeNode)> = slots
        .into_iter()
        .map(|slot| match slot {
            Slot::Keep(c) => (c.label().unwrap_or("").to_string(), c.clone()),
            Slot::Group(g) => (grouping[g].0.clone(), TreeNode::object(members[g].take().unwrap_or_default())),
        })
        .collect();
    Ok(DocumentTree::new(TreeNode::object(entries)))
}

/// Partitions every root key into seeded groups of at most four keys with
/// names not used at the root.
pub fn default_grouping(doc: &DocumentTree, seed: u64) -> Grouping {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<String> = match doc.root().kind() {
        NodeKind::Object(children) => children.iter().filter_map(|c| c.label()).map(String::from).collect(),
        _ => return Vec::new(),
    };
    keys.shuffle(&mut rng);
    let mut names: Vec<&str> = GROUP_NAMES.to_vec();
    names.shuffle(&mut rng);
    let mut names = names.into_iter().map(String::from).chain((1..).map(|i| format!("group_{i}")));
    keys.chunks(GROUP_SIZE)
        .map(|chunk| {
            let name = names.find(|n| !keys.contains(n)).expect("unbounded name supply");
            (name, chunk.to_vec())
        })
        .collect()
}
